#include "cosparse/tensor_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace cosparse {
namespace {

constexpr char kMagic[4] = {'C', 'S', 'A', 'F'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint8_t kDtypeF32 = 0;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::string& out, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  Reader(const std::string& bytes) : bytes_(bytes) {}

  bool has(std::size_t n) const { return pos_ + n <= bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint8_t u8() { return static_cast<std::uint8_t>(bytes_[pos_++]); }

  std::uint16_t u16() {
    std::uint16_t v = static_cast<std::uint8_t>(bytes_[pos_]) |
                      (static_cast<std::uint16_t>(static_cast<std::uint8_t>(bytes_[pos_ + 1])) << 8);
    pos_ += 2;
    return v;
  }

  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  float f32() {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) {
      bits |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return std::bit_cast<float>(bits);
  }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::IoFailure, "cannot open: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  require(!in.bad(), Errc::IoFailure, "read failed: " + path);
  return bytes;
}

void dump(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), Errc::IoFailure, "cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  require(out.good(), Errc::IoFailure, "write failed: " + path);
}

}  // namespace

TensorFile read_tensor(const std::string& path) {
  const std::string bytes = slurp(path);
  Reader r(bytes);
  require(r.has(4 + 2 + 1 + 1), Errc::TruncatedPayload, "header short: " + path);
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  require(std::memcmp(magic, kMagic, 4) == 0, Errc::BadMagic,
          "not a CSAF tensor: " + path);
  const std::uint16_t version = r.u16();
  require(version == kVersion, Errc::UnsupportedVersion,
          "unsupported version " + std::to_string(version));
  const std::uint8_t dtype = r.u8();
  require(dtype == kDtypeF32, Errc::UnsupportedVersion,
          "unsupported dtype " + std::to_string(dtype));
  const std::uint8_t rank = r.u8();
  require(rank >= 1, Errc::BadMagic, "rank 0 tensor");
  require(r.has(8 * static_cast<std::size_t>(rank)), Errc::TruncatedPayload,
          "dims short: " + path);

  TensorFile t;
  t.dims.resize(rank);
  for (auto& d : t.dims) d = r.u64();
  const std::uint64_t count = t.element_count();
  require(r.remaining() == 4 * count, Errc::TruncatedPayload,
          "payload length mismatch: expected " + std::to_string(4 * count) +
              " bytes, got " + std::to_string(r.remaining()));
  t.payload.resize(count);
  for (auto& v : t.payload) v = r.f32();
  return t;
}

void write_tensor(const std::string& path, const TensorFile& tensor) {
  require(!tensor.dims.empty(), Errc::InvalidArgument, "rank >= 1 required");
  require(tensor.dims.size() <= 255, Errc::InvalidArgument, "rank > 255");
  require(tensor.payload.size() == tensor.element_count(), Errc::DimMismatch,
          "payload length != product(dims)");
  std::string bytes;
  bytes.reserve(16 + 8 * tensor.dims.size() + 4 * tensor.payload.size());
  bytes.append(kMagic, 4);
  put_u16(bytes, kVersion);
  bytes.push_back(static_cast<char>(kDtypeF32));
  bytes.push_back(static_cast<char>(tensor.dims.size()));
  for (auto d : tensor.dims) put_u64(bytes, d);
  for (float v : tensor.payload) put_f32(bytes, v);
  dump(path, bytes);
}

namespace {

// PGM header tokens may be separated by whitespace and '#' comment lines.
int pgm_token(std::istream& in, const std::string& path) {
  for (;;) {
    int c = in.peek();
    require(c != EOF, Errc::BadHeader, "truncated PGM header: " + path);
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  int value = 0;
  bool any = false;
  for (;;) {
    int c = in.peek();
    if (c == EOF || !std::isdigit(c)) break;
    value = value * 10 + (in.get() - '0');
    any = true;
    require(value <= std::numeric_limits<int>::max() / 16, Errc::BadHeader,
            "oversized PGM header value: " + path);
  }
  require(any, Errc::BadHeader, "malformed PGM header: " + path);
  return value;
}

}  // namespace

ScalarField read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::IoFailure, "cannot open: " + path);
  char p = 0, five = 0;
  in.get(p);
  in.get(five);
  require(p == 'P' && five == '5', Errc::BadHeader, "not a P5 PGM: " + path);
  const int width = pgm_token(in, path);
  const int height = pgm_token(in, path);
  const int max_val = pgm_token(in, path);
  require(width > 0 && height > 0, Errc::BadHeader, "bad PGM dims: " + path);
  require(max_val >= 1, Errc::BadHeader, "bad PGM maxval: " + path);
  require(max_val <= 65535, Errc::UnsupportedMaxVal,
          "PGM maxval > 65535: " + path);
  in.get();  // single whitespace byte before raster

  const bool wide = max_val > 255;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<char> raster(count * (wide ? 2 : 1));
  in.read(raster.data(), static_cast<std::streamsize>(raster.size()));
  require(in.gcount() == static_cast<std::streamsize>(raster.size()),
          Errc::BadHeader, "truncated PGM raster: " + path);

  ScalarField field(height, width);
  for (std::size_t i = 0; i < count; ++i) {
    int raw;
    if (wide) {
      raw = (static_cast<std::uint8_t>(raster[2 * i]) << 8) |
            static_cast<std::uint8_t>(raster[2 * i + 1]);
    } else {
      raw = static_cast<std::uint8_t>(raster[i]);
    }
    field.values[i] = static_cast<double>(raw) / max_val;
  }
  return field;
}

void write_pgm(const std::string& path, const ScalarField& field, int max_val) {
  field.validate();
  require(field.width > 0 && field.height > 0, Errc::InvalidArgument,
          "empty field");
  require(max_val >= 1, Errc::InvalidArgument, "maxval < 1");
  require(max_val <= 65535, Errc::UnsupportedMaxVal, "maxval > 65535");
  std::string bytes = "P5\n" + std::to_string(field.width) + " " +
                      std::to_string(field.height) + "\n" +
                      std::to_string(max_val) + "\n";
  const bool wide = max_val > 255;
  for (double v : field.values) {
    double clamped = std::min(1.0, std::max(0.0, v));
    int q = static_cast<int>(std::lround(clamped * max_val));
    if (wide) bytes.push_back(static_cast<char>((q >> 8) & 0xFF));
    bytes.push_back(static_cast<char>(q & 0xFF));
  }
  dump(path, bytes);
}

TensorFile to_tensor(const ScalarField& field) {
  TensorFile t;
  t.dims = {static_cast<std::uint64_t>(field.height),
            static_cast<std::uint64_t>(field.width)};
  t.payload.assign(field.values.begin(), field.values.end());
  return t;
}

TensorFile to_tensor(const SemanticField& field) {
  TensorFile t;
  t.dims = {static_cast<std::uint64_t>(field.height),
            static_cast<std::uint64_t>(field.width),
            static_cast<std::uint64_t>(field.num_classes)};
  t.payload.assign(field.probs.begin(), field.probs.end());
  return t;
}

TensorFile to_tensor(const Eigen::MatrixXd& matrix) {
  TensorFile t;
  t.dims = {static_cast<std::uint64_t>(matrix.rows()),
            static_cast<std::uint64_t>(matrix.cols())};
  t.payload.resize(static_cast<std::size_t>(matrix.size()));
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      t.payload[i++] = static_cast<float>(matrix(r, c));
    }
  }
  return t;
}

TensorFile mask_to_tensor(const ScalarField& field) {
  TensorFile t;
  t.dims = {static_cast<std::uint64_t>(field.height),
            static_cast<std::uint64_t>(field.width)};
  t.payload.resize(static_cast<std::size_t>(field.size()));
  for (int i = 0; i < field.size(); ++i) {
    t.payload[i] = field.mask.empty() ? 1.0f : (field.mask[i] ? 1.0f : 0.0f);
  }
  return t;
}

ScalarField scalar_from_tensor(const TensorFile& tensor) {
  require(tensor.dims.size() == 2, Errc::DimMismatch,
          "scalar field tensor must be rank 2");
  ScalarField field(static_cast<int>(tensor.dims[0]),
                    static_cast<int>(tensor.dims[1]));
  for (std::size_t i = 0; i < tensor.payload.size(); ++i) {
    field.values[i] = tensor.payload[i];
  }
  return field;
}

void attach_mask(ScalarField& field, const TensorFile& mask_tensor) {
  require(mask_tensor.dims.size() == 2 &&
              mask_tensor.dims[0] == static_cast<std::uint64_t>(field.height) &&
              mask_tensor.dims[1] == static_cast<std::uint64_t>(field.width),
          Errc::DimMismatch, "mask dims do not match field");
  field.mask.resize(field.values.size());
  for (std::size_t i = 0; i < field.mask.size(); ++i) {
    field.mask[i] = mask_tensor.payload[i] != 0.0f ? 1 : 0;
  }
}

SemanticField semantic_from_tensor(const TensorFile& tensor, bool normalized) {
  require(tensor.dims.size() == 3, Errc::DimMismatch,
          "semantic field tensor must be rank 3");
  SemanticField field(static_cast<int>(tensor.dims[0]),
                      static_cast<int>(tensor.dims[1]),
                      static_cast<int>(tensor.dims[2]));
  for (std::size_t i = 0; i < tensor.payload.size(); ++i) {
    field.probs[i] = tensor.payload[i];
  }
  field.normalized = normalized;
  return field;
}

Eigen::MatrixXd matrix_from_tensor(const TensorFile& tensor) {
  require(tensor.dims.size() == 2, Errc::DimMismatch,
          "matrix tensor must be rank 2");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(tensor.dims[0]),
                    static_cast<Eigen::Index>(tensor.dims[1]));
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = tensor.payload[i++];
  }
  return m;
}

void save_operator(const std::string& path, const AnalysisOperator& op) {
  op.validate();
  write_tensor(path, to_tensor(op.entries));
}

AnalysisOperator load_operator(const std::string& path, Modality modality) {
  AnalysisOperator op;
  op.modality = modality;
  op.entries = matrix_from_tensor(read_tensor(path));
  require(op.entries.rows() >= 1 && op.entries.cols() >= 1, Errc::BadDims,
          "empty operator: " + path);
  for (Eigen::Index i = 0; i < op.entries.rows(); ++i) {
    const double norm = op.entries.row(i).norm();
    require(std::abs(norm - 1.0) <= 1e-6, Errc::InvalidArgument,
            "operator row " + std::to_string(i) + " in " + path +
                " violates the unit-norm invariant");
    op.entries.row(i) /= norm;  // absorb f32 rounding
  }
  return op;
}

}  // namespace cosparse
