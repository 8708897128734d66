#include "szo/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace szo {

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorKind::io, "cannot format real");
  return std::string(buf, end);
}

namespace {

void write_row(std::ostream& os, double lead, const auto& row) {
  os << format_real(lead);
  for (Eigen::Index j = 0; j < row.size(); ++j) os << ' ' << format_real(row[j]);
  os << '\n';
}

void write_vector_line(std::ostream& os, const char* key, const DenseVector& v) {
  os << key;
  for (Eigen::Index j = 0; j < v.size(); ++j) os << ' ' << format_real(v[j]);
  os << '\n';
}

double parse_real(const std::string& token, const std::string& where) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::io, "bad number '" + token + "' in " + where);
  }
  return v;
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  std::vector<std::string> next(const std::string& what) {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return tokens;
    }
    throw Error(ErrorKind::io, "unexpected end of dataset while reading " + what);
  }

  std::vector<std::string> keyed(const std::string& key, std::size_t n_values) {
    auto tokens = next(key);
    if (tokens[0] != key || tokens.size() != n_values + 1) {
      throw Error(ErrorKind::io, "line " + std::to_string(line_no_) + ": expected '" + key + "' with " +
                                     std::to_string(n_values) + " value(s)");
    }
    return tokens;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& is_;
  std::size_t line_no_ = 0;
};

std::size_t parse_count(const std::string& token, const std::string& key) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v == 0) {
    throw Error(ErrorKind::io, "bad " + key + " '" + token + "'");
  }
  return v;
}

}  // namespace

void write_dataset(std::ostream& os, const Dataset& ds) {
  os << "szo-dataset 1\n";
  std::visit(
      [&os](const auto& data) {
        using T = std::decay_t<decltype(data)>;
        constexpr bool is_logistic = std::is_same_v<T, LogisticDataset>;
        os << "kind " << (is_logistic ? "logistic" : "ridge") << '\n';
        os << "rows " << data.rows() << '\n';
        os << "cols " << data.dim() << '\n';
        os << "seed " << data.seed << '\n';
        write_vector_line(os, "x_star", data.x_star);
        if constexpr (is_logistic) {
          os << "data\n";
          for (Eigen::Index i = 0; i < data.A.rows(); ++i) write_row(os, data.y[i], data.A.row(i));
        } else {
          os << "c " << format_real(data.c) << '\n';
          os << "noise_std " << format_real(data.noise_std) << '\n';
          os << "data\n";
          for (Eigen::Index i = 0; i < data.H.rows(); ++i) write_row(os, data.b[i], data.H.row(i));
        }
      },
      ds);
}

Dataset read_dataset(std::istream& is) {
  LineReader in(is);
  auto header = in.next("header");
  if (header.size() != 2 || header[0] != "szo-dataset" || header[1] != "1") {
    throw Error(ErrorKind::io, "not an szo-dataset v1 file");
  }
  const std::string kind = in.keyed("kind", 1)[1];
  if (kind != "logistic" && kind != "ridge") throw Error(ErrorKind::io, "unknown dataset kind " + kind);
  const std::size_t rows = parse_count(in.keyed("rows", 1)[1], "rows");
  const std::size_t cols = parse_count(in.keyed("cols", 1)[1], "cols");
  const auto seed_tok = in.keyed("seed", 1)[1];
  std::uint64_t seed = 0;
  if (auto [p, ec] = std::from_chars(seed_tok.data(), seed_tok.data() + seed_tok.size(), seed);
      ec != std::errc() || p != seed_tok.data() + seed_tok.size()) {
    throw Error(ErrorKind::io, "bad seed '" + seed_tok + "'");
  }
  const auto xs = in.keyed("x_star", cols);
  DenseVector x_star(static_cast<Eigen::Index>(cols));
  for (std::size_t j = 0; j < cols; ++j) x_star[static_cast<Eigen::Index>(j)] = parse_real(xs[j + 1], "x_star");

  double c = 0.0;
  double noise_std = 0.0;
  if (kind == "ridge") {
    c = parse_real(in.keyed("c", 1)[1], "c");
    noise_std = parse_real(in.keyed("noise_std", 1)[1], "noise_std");
  }
  in.keyed("data", 0);

  DenseMatrix M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  DenseVector lead(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    auto tokens = in.next("data row");
    if (tokens.size() != cols + 1) {
      throw Error(ErrorKind::io, "line " + std::to_string(in.line_no()) + ": expected " +
                                     std::to_string(cols + 1) + " values");
    }
    const std::string where = "data row " + std::to_string(i);
    lead[static_cast<Eigen::Index>(i)] = parse_real(tokens[0], where);
    for (std::size_t j = 0; j < cols; ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_real(tokens[j + 1], where);
    }
  }

  if (kind == "logistic") {
    for (Eigen::Index i = 0; i < lead.size(); ++i) {
      if (lead[i] != 1.0 && lead[i] != -1.0) throw Error(ErrorKind::io, "logistic label must be -1 or +1");
    }
    if (M.cwiseAbs().maxCoeff() > 1.0) throw Error(ErrorKind::io, "logistic features must lie in [-1, 1]");
    LogisticDataset ds;
    ds.A = std::move(M);
    ds.y = std::move(lead);
    ds.seed = seed;
    ds.x_star = std::move(x_star);
    return ds;
  }
  if (!(c > 0.0)) throw Error(ErrorKind::io, "ridge weight c must be positive");
  RidgeDataset ds;
  ds.H = std::move(M);
  ds.b = std::move(lead);
  ds.c = c;
  ds.seed = seed;
  ds.x_star = std::move(x_star);
  ds.noise_std = noise_std;
  return ds;
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  write_dataset(os, ds);
  if (!os) throw Error(ErrorKind::io, "write failed for " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot open " + path.string());
  return read_dataset(is);
}

}  // namespace szo
