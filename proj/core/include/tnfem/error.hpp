#pragma once

#include <stdexcept>
#include <string>

namespace tnfem {

// Structural problems in mesh connectivity or dof layout (non-conforming
// input, repeated vertices, inconsistent shared entities).
struct MeshError : std::runtime_error {
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate geometry: zero-measure cells, collapsed frames.
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Singular or ill-conditioned direction/dual systems.
struct FrameError : std::runtime_error {
  explicit FrameError(const std::string& what) : std::runtime_error(what) {}
};

// Linear solver breakdown or non-convergence; carries the iteration story
// in the message.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Mesh file reader errors, with 1-based line numbers.
struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

}  // namespace tnfem
