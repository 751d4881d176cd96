#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcfv {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometry
class DegenerateFace : public Error {
 public:
  using Error::Error;
};
class OpenCell : public Error {
 public:
  using Error::Error;
};
class InvertedCell : public Error {
 public:
  using Error::Error;
};
class StarShapeViolation : public Error {
 public:
  using Error::Error;
};

// Mesh I/O
class ParseError : public Error {
 public:
  using Error::Error;
};
class TopologyError : public Error {
 public:
  using Error::Error;
};

// Generators
class GenerationFailed : public Error {
 public:
  GenerationFailed(const std::string& what, std::ptrdiff_t cell = -1, std::ptrdiff_t face = -1)
      : Error(what), cell_(cell), face_(face) {}
  std::ptrdiff_t cell() const { return cell_; }
  std::ptrdiff_t face() const { return face_; }

 private:
  std::ptrdiff_t cell_;
  std::ptrdiff_t face_;
};
class CalibrationFailed : public Error {
 public:
  CalibrationFailed(const std::string& what, double best_amplitude, double best_theta_max)
      : Error(what), best_amplitude_(best_amplitude), best_theta_max_(best_theta_max) {}
  double best_amplitude() const { return best_amplitude_; }
  double best_theta_max() const { return best_theta_max_; }

 private:
  double best_amplitude_;
  double best_theta_max_;
};

// Quality
class NonConvexPairing : public Error {
 public:
  using Error::Error;
};

// Operators
class FaceDegenerate : public Error {
 public:
  using Error::Error;
};
class SingularStencil : public Error {
 public:
  SingularStencil(const std::string& what, std::size_t cell) : Error(what), cell_(cell) {}
  std::size_t cell() const { return cell_; }

 private:
  std::size_t cell_;
};

}  // namespace gcfv
