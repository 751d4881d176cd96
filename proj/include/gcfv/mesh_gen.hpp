#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gcfv/mesh.hpp"

namespace gcfv {

enum class Family { hex, hexskew, triprism, polyprism, tet, poly };

std::string_view to_string(Family family);
/// Accepts the lower-case family names; throws std::invalid_argument otherwise.
Family parse_family(std::string_view name);

/// Generator input for the unit cube.
///
/// `skew` is the amplitude of the smooth interior shear (hexskew, and the
/// footprint map of triprism/polyprism). `jitter` is the random vertex or seed
/// displacement as a fraction of the lattice spacing (tet, poly, and an
/// optional footprint jitter for the prism families).
struct GenSpec {
  Family family = Family::hex;
  int n = 10;
  double skew = 0.0;
  double jitter = 0.0;
  std::uint64_t seed = 1;
};

/// Builds the mesh for `spec`. Throws std::invalid_argument for n < 2 or
/// out-of-range amplitudes and GenerationFailed when the result has a
/// non-positive orthogonal distance or fails the mesh audit.
Mesh generate(const GenSpec& spec);

/// Which amplitude calibrate() varies for a family (none for hex).
enum class Amplitude { none, skew, jitter };
Amplitude calibrated_amplitude(Family family);

struct Calibration {
  double amplitude = 0.0;
  double theta_max = 0.0;
};

/// Bisects the family's amplitude until theta_max is within +-2 degrees of the
/// target. Throws CalibrationFailed if the target is out of reach.
Calibration calibrate(Family family, int n, double target_theta_max, std::uint64_t seed = 1);

/// Amplitudes matching the reference quality statistics, fixed across levels.
GenSpec reference_spec(Family family, int n, std::uint64_t seed = 1);

}  // namespace gcfv
