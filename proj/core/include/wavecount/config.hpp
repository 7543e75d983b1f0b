#pragma once

#include "wavecount/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wavecount {

/// An experiment as read from a JSON document: either geometric (beam +
/// detector regions/smearings, scalars derived by quadrature) or direct
/// (sigma, s, P supplied as numbers). Unknown keys are rejected.
struct Experiment {
    bool direct = false;
    std::optional<BeamField> beam;
    std::vector<DetectorSpec> detectors;        // geometric entries
    std::vector<DetectorParams> direct_params;  // direct entries
    std::vector<DetectorMode> modes;            // per detector, both cases
    QuadratureSpec quadrature;
    ExperimentMode mode = ExperimentMode::single;

    /// Derived scalars (geometric) or the supplied ones (direct).
    std::vector<DetectorParams> params() const;
};

Experiment parse_experiment(const std::string& json_text);
Experiment load_experiment(const std::string& path);

}  // namespace wavecount
