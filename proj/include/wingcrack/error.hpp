#pragma once

#include <stdexcept>
#include <string>

namespace wingcrack {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input geometry: self-intersections, fractures leaving the domain, crossing fractures.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Mesh construction or modification failed (element budget, size floor, cavity re-triangulation).
class MeshError : public Error {
 public:
  using Error::Error;
};

class FloatingStructureError : public Error {
 public:
  FloatingStructureError(const std::string& what, int null_space_dimension)
      : Error(what), null_space_dimension_(null_space_dimension) {}
  int null_space_dimension() const { return null_space_dimension_; }

 private:
  int null_space_dimension_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ContactError : public Error {
 public:
  using Error::Error;
};

class FractureMechanicsError : public Error {
 public:
  using Error::Error;
};

}  // namespace wingcrack
