#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "cosparse/fields.hpp"

namespace cosparse {

// On-disk tensor: magic "CSAF", u16 version = 1, u8 dtype = 0 (f32),
// u8 rank, rank x u64 dims, then row-major little-endian f32 payload.
// f32 on disk, f64 in memory.
struct TensorFile {
  std::vector<std::uint64_t> dims;
  std::vector<float> payload;

  std::uint64_t element_count() const {
    std::uint64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
};

TensorFile read_tensor(const std::string& path);
void write_tensor(const std::string& path, const TensorFile& tensor);

// Binary P5 PGM, maxval <= 65535 (two-byte samples are big-endian).
// Values are scaled to [0,1] on read; clamped to [0,1] and quantized on write.
ScalarField read_pgm(const std::string& path);
void write_pgm(const std::string& path, const ScalarField& field, int max_val = 255);

// conversions between in-memory types and TensorFile
TensorFile to_tensor(const ScalarField& field);              // dims [h, w]
TensorFile to_tensor(const SemanticField& field);            // dims [h, w, L]
TensorFile to_tensor(const Eigen::MatrixXd& matrix);         // dims [rows, cols]
TensorFile mask_to_tensor(const ScalarField& field);         // dims [h, w], 0/1

ScalarField scalar_from_tensor(const TensorFile& tensor);
void attach_mask(ScalarField& field, const TensorFile& mask_tensor);
SemanticField semantic_from_tensor(const TensorFile& tensor, bool normalized = false);
Eigen::MatrixXd matrix_from_tensor(const TensorFile& tensor);

// Operator files are plain rank-2 tensors. Loading re-validates row norms
// (deviation beyond 1e-6 is a hard error) and renormalizes the surviving
// f32 rounding so the in-memory invariant holds at 1e-10.
void save_operator(const std::string& path, const AnalysisOperator& op);
AnalysisOperator load_operator(const std::string& path, Modality modality);

}  // namespace cosparse
