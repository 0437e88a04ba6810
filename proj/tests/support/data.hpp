#pragma once

#include <filesystem>
#include <string>

#include "cl12/json_io.hpp"

namespace testdata {

inline std::filesystem::path path(const std::string& name) { return std::filesystem::path(CL12_DATA_DIR) / name; }

inline cl12::Proof proof(const std::string& name) { return cl12::proof_from_json(cl12::read_json_file(path(name))); }

inline cl12::Interpretation interpretation(const std::string& name) {
  return cl12::interpretation_from_json(cl12::read_json_file(path(name)));
}

inline const char* cube_sequent() {
  return "Ax: (cube(x) = mult(mult(x,x),x)), !x: !y: ?z: (z = mult(x,y)) ||- !x: ?y: (y = cube(x))";
}

// Product and cube modulo m: the arithmetic reading of the cube sequent.
inline cl12::FiniteModel modular_arithmetic(cl12::Element m) {
  cl12::FiniteModel f;
  f.domain_size = m;
  f.set_function("mult", 2, [](std::span<const cl12::Element> a) { return a[0] * a[1]; });
  f.set_function("cube", 1, [](std::span<const cl12::Element> a) { return a[0] * a[0] * a[0]; });
  return f;
}

// A non-arithmetic model of the same axiom: mult is max and cube is the identity.
inline cl12::FiniteModel max_model(cl12::Element m) {
  cl12::FiniteModel f;
  f.domain_size = m;
  f.set_function("mult", 2, [](std::span<const cl12::Element> a) { return std::max(a[0], a[1]); });
  f.set_function("cube", 1, [](std::span<const cl12::Element> a) { return a[0]; });
  return f;
}

}  // namespace testdata
