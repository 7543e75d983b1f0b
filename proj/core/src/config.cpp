#include "wavecount/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavecount {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("experiment config: " + msg);
}

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) fail("unknown key \"" + key + "\" in " + where);
    }
}

double number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where + " is missing \"" + std::string(key) + "\"");
    if (!obj[key].is_number()) fail(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

Vec2 vec2(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where + " is missing \"" + std::string(key) + "\"");
    const json& arr = obj[key];
    if (!arr.is_array() || arr.size() != 2 || !arr[0].is_number() || !arr[1].is_number())
        fail(where + "." + key + " must be an array of two numbers");
    return {arr[0].get<double>(), arr[1].get<double>()};
}

GridData parse_grid(const json& obj, const std::string& where, bool allow_imag) {
    GridData grid;
    grid.origin = vec2(obj, where, "origin");
    grid.spacing = number(obj, where, "spacing");
    if (!obj.contains("values_re") || !obj["values_re"].is_array())
        fail(where + " is missing \"values_re\" rows");
    const json& re = obj["values_re"];
    grid.ny = static_cast<int>(re.size());
    if (grid.ny < 2) fail(where + ".values_re needs at least 2 rows");
    grid.nx = static_cast<int>(re[0].size());
    const json* im = nullptr;
    if (obj.contains("values_im")) {
        if (!allow_imag) fail(where + " must be real (no values_im)");
        im = &obj["values_im"];
        if (!im->is_array() || im->size() != re.size())
            fail(where + ".values_im must match values_re in shape");
    }
    for (int iy = 0; iy < grid.ny; ++iy) {
        const json& row = re[static_cast<std::size_t>(iy)];
        if (!row.is_array() || static_cast<int>(row.size()) != grid.nx)
            fail(where + ".values_re rows must have equal lengths");
        for (int ix = 0; ix < grid.nx; ++ix) {
            double vi = 0.0;
            if (im) vi = (*im)[static_cast<std::size_t>(iy)][static_cast<std::size_t>(ix)].get<double>();
            grid.values.emplace_back(row[static_cast<std::size_t>(ix)].get<double>(), vi);
        }
    }
    return grid;
}

BeamField parse_beam(const json& obj) {
    require_keys(obj, "beam", {"kind", "waist", "center", "origin", "spacing", "values_re", "values_im"});
    const std::string kind = obj.value("kind", "gaussian");
    if (kind == "gaussian") {
        require_keys(obj, "beam", {"kind", "waist", "center"});
        Vec2 center{0.0, 0.0};
        if (obj.contains("center")) center = vec2(obj, "beam", "center");
        return BeamField::gaussian(obj.contains("waist") ? number(obj, "beam", "waist") : 1.0,
                                   center);
    }
    if (kind == "grid") return BeamField::from_grid(parse_grid(obj, "beam", true));
    fail("beam.kind must be \"gaussian\" or \"grid\"");
}

SmearingFunction parse_smearing(const json& obj, const std::string& where) {
    require_keys(obj, where, {"kind", "width", "center", "origin", "spacing", "values_re"});
    const std::string kind = obj.value("kind", "gaussian");
    if (kind == "gaussian") {
        require_keys(obj, where, {"kind", "width", "center"});
        Vec2 center{0.0, 0.0};
        if (obj.contains("center")) center = vec2(obj, where, "center");
        return SmearingFunction::gaussian(number(obj, where, "width"), center);
    }
    if (kind == "grid") return SmearingFunction::from_grid(parse_grid(obj, where, false));
    fail(where + ".kind must be \"gaussian\" or \"grid\"");
}

DetectorRegion parse_region(const json& obj, const std::string& where) {
    require_keys(obj, where, {"shape", "center", "radius", "half_widths"});
    if (!obj.contains("shape")) fail(where + " is missing \"shape\"");
    const std::string shape = obj["shape"].get<std::string>();
    if (shape == "disc") {
        require_keys(obj, where, {"shape", "center", "radius"});
        return DetectorRegion::disc(vec2(obj, where, "center"), number(obj, where, "radius"));
    }
    if (shape == "rect") {
        require_keys(obj, where, {"shape", "center", "half_widths"});
        const json& hw = obj["half_widths"];
        if (!hw.is_array() || hw.size() != 2)
            fail(where + ".half_widths must be an array of two numbers");
        return DetectorRegion::rect(vec2(obj, where, "center"), hw[0].get<double>(),
                                    hw[1].get<double>());
    }
    fail(where + ".shape must be \"disc\" or \"rect\"");
}

std::complex<double> parse_s(const json& obj, const std::string& where) {
    const json& s = obj["s"];
    if (s.is_number()) return {s.get<double>(), 0.0};
    if (s.is_array() && s.size() == 2 && s[0].is_number() && s[1].is_number())
        return {s[0].get<double>(), s[1].get<double>()};
    fail(where + ".s must be a number or an [re, im] pair");
}

ExperimentMode infer_mode(const std::vector<DetectorMode>& modes) {
    if (modes.size() == 1) return ExperimentMode::single;
    std::size_t waves = 0;
    for (const auto m : modes)
        if (m == DetectorMode::wave) ++waves;
    if (waves == modes.size()) return ExperimentMode::wave_wave;
    if (waves == 0) return ExperimentMode::count_count;
    if (modes.size() == 2 && waves == 1) return ExperimentMode::wave_count;
    fail("unsupported detector arrangement: mix wave and count detectors only as one "
         "wave + one count pair");
}

}  // namespace

std::vector<DetectorParams> Experiment::params() const {
    if (direct) return direct_params;
    return experiment_params(*beam, detectors, quadrature);
}

Experiment parse_experiment(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        fail(std::string("not valid JSON (") + err.what() + ")");
    }
    require_keys(root, "top level", {"beam", "detectors", "quadrature"});
    if (!root.contains("detectors") || !root["detectors"].is_array() ||
        root["detectors"].empty())
        fail("\"detectors\" must be a non-empty array");

    Experiment exp;
    if (root.contains("quadrature")) {
        const json& q = root["quadrature"];
        require_keys(q, "quadrature", {"half_extent", "points_per_axis", "check_convergence"});
        if (q.contains("half_extent")) exp.quadrature.half_extent = number(q, "quadrature", "half_extent");
        if (q.contains("points_per_axis")) {
            if (!q["points_per_axis"].is_number_integer())
                fail("quadrature.points_per_axis must be an integer");
            exp.quadrature.points_per_axis = q["points_per_axis"].get<int>();
            if (exp.quadrature.points_per_axis < 4)
                fail("quadrature.points_per_axis must be at least 4");
        }
        if (q.contains("check_convergence")) {
            if (!q["check_convergence"].is_boolean())
                fail("quadrature.check_convergence must be a boolean");
            exp.quadrature.check_convergence = q["check_convergence"].get<bool>();
        }
    }

    // A detector entry is geometric when it carries a region, direct when it
    // carries scalars; the two styles cannot be mixed.
    std::size_t geometric = 0, direct = 0;
    for (const auto& det : root["detectors"]) {
        if (det.contains("region")) ++geometric;
        else ++direct;
    }
    if (geometric > 0 && direct > 0)
        fail("detectors mix geometric entries (with \"region\") and direct entries "
             "(with scalars); use one style");
    exp.direct = direct > 0;

    std::size_t idx = 0;
    for (const auto& det : root["detectors"]) {
        const std::string where = "detectors[" + std::to_string(idx++) + "]";
        if (!det.contains("mode")) fail(where + " is missing \"mode\"");
        const std::string mode_str = det["mode"].get<std::string>();
        DetectorMode mode;
        if (mode_str == "wave") mode = DetectorMode::wave;
        else if (mode_str == "count") mode = DetectorMode::count;
        else fail(where + ".mode must be \"wave\" or \"count\"");
        exp.modes.push_back(mode);

        if (exp.direct) {
            DetectorParams p;
            if (mode == DetectorMode::wave) {
                require_keys(det, where, {"mode", "sigma", "s"});
                p.sigma = number(det, where, "sigma");
                if (!det.contains("s")) fail(where + " is missing \"s\"");
                p.s = parse_s(det, where);
            } else {
                require_keys(det, where, {"mode", "P"});
                p.P = number(det, where, "P");
            }
            exp.direct_params.push_back(p);
        } else {
            require_keys(det, where, {"mode", "region", "smearing"});
            DetectorSpec spec;
            spec.mode = mode;
            spec.region = parse_region(det["region"], where + ".region");
            if (det.contains("smearing"))
                spec.smearing = parse_smearing(det["smearing"], where + ".smearing");
            if (mode == DetectorMode::wave && !spec.smearing)
                fail(where + ": wave detectors need a \"smearing\" function");
            exp.detectors.push_back(std::move(spec));
        }
    }

    if (!exp.direct) {
        if (!root.contains("beam")) fail("geometric experiments need a \"beam\"");
        exp.beam = parse_beam(root["beam"]);
    } else if (root.contains("beam")) {
        fail("direct experiments (scalar detectors) must not carry a \"beam\"");
    }

    exp.mode = infer_mode(exp.modes);
    return exp;
}

Experiment load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("experiment config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment(buf.str());
}

}  // namespace wavecount
