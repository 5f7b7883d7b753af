#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lattice/approximation.hpp"
#include "lattice/criterion.hpp"
#include "lattice/index_set.hpp"
#include "lattice/weights.hpp"

namespace lattice {

// Malformed configuration or file content.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failures (missing file, unwritable path).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical JSON form: {"kind": ..., "d": ..., "gammas"/"order_factors"/"table": ...}
// with every weight rendered as a decimal string, so explicit tables round-trip
// bit-exactly. Parsing accepts numbers or strings for weight values.
std::string weights_to_json(const WeightModel& m);
WeightModel weights_from_json(const std::string& text);

// FNV-1a over the canonical JSON serialization.
std::uint64_t weight_model_hash(const WeightModel& m);

struct VectorFileMetadata {
  std::optional<double> alpha;
  std::optional<std::uint64_t> weight_hash;
  std::optional<double> criterion;
};

// Text format: line 1 "d n", line 2 the components of z, then optional
// "# key=value" metadata lines.
std::string vector_file_text(const GeneratingVector& gv, const VectorFileMetadata& meta);
void write_vector_file(const std::string& path, const GeneratingVector& gv,
                       const VectorFileMetadata& meta);
GeneratingVector read_vector_file(const std::string& path,
                                  VectorFileMetadata* meta = nullptr);

// Header line "# d=... M=... weight_hash=...", then one index per line,
// components tab-separated.
void write_index_dump(std::ostream& os, const IndexSet& A, std::uint64_t weight_hash);

// CSV rows "h_1,...,h_d,re,im", one stored coefficient per line.
void write_coefficients_csv(std::ostream& os, const FourierPolynomial& f);

struct TestFunctionSpec {
  std::string kind;                     // "random_polynomial" | "kernel_product"
  std::uint64_t seed = 0;               // random_polynomial
  double M = 0.0;                       // random_polynomial spectrum cutoff
  std::vector<double> coefficients;     // kernel_product
};

TestFunctionSpec test_function_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lattice
