#include "roughmild/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace roughmild {

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double out = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument("bad float token: '" + token + "'");
  }
  return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

/// key=value token access for header lines.
std::string header_field(const std::vector<std::string>& tokens,
                         const std::string& key) {
  const std::string prefix = key + "=";
  for (const auto& tok : tokens) {
    if (tok.rfind(prefix, 0) == 0) return tok.substr(prefix.size());
  }
  throw std::invalid_argument("missing header field '" + key + "'");
}

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) return line;
  }
  throw std::invalid_argument("unexpected end of rough-path data");
}

void write_row(std::ostream& out, const double* data, int count) {
  for (int i = 0; i < count; ++i) {
    if (i) out << ' ';
    out << format_double(data[i]);
  }
  out << '\n';
}

std::vector<double> parse_row(const std::string& line, int expect) {
  auto tokens = split_ws(line);
  if (static_cast<int>(tokens.size()) != expect) {
    throw std::invalid_argument("expected " + std::to_string(expect) +
                                " floats per line, got " +
                                std::to_string(tokens.size()));
  }
  std::vector<double> out(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out[i] = parse_double(tokens[i]);
  return out;
}

}  // namespace

void write_rough_path(std::ostream& out, const RoughPath& rough,
                      const DriverFileInfo* info, bool write_total) {
  const int d = rough.dim();
  const int n = rough.grid().n_steps();
  out << "roughpath v1 dim=" << d << " steps=" << n
      << " T=" << format_double(rough.grid().horizon())
      << " alpha=" << format_double(rough.alpha()) << '\n';
  if (info && info->kind) {
    out << "meta kind=" << to_string(*info->kind)
        << " hurst=" << format_double(info->hurst) << " seed=" << info->seed
        << " fine_factor=" << info->fine_factor << '\n';
  }
  if (write_total) {
    const Eigen::MatrixXd total = rough.chen_area(0, n);
    out << "total";
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) out << ' ' << format_double(total(r, c));
    }
    out << '\n';
  }
  std::vector<double> row(d);
  for (int i = 0; i <= n; ++i) {
    for (int r = 0; r < d; ++r) row[r] = rough.first_level().values()(r, i);
    write_row(out, row.data(), d);
  }
  std::vector<double> area_row(d * d);
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXd& a = rough.step_areas()[k];
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) area_row[r * d + c] = a(r, c);
    }
    write_row(out, area_row.data(), d * d);
  }
}

RoughPath read_rough_path(std::istream& in, DriverFileInfo* info) {
  std::string line = next_content_line(in);
  auto header = split_ws(line);
  if (header.size() < 2 || header[0] != "roughpath" || header[1] != "v1") {
    throw std::invalid_argument("not a roughpath v1 header: '" + line + "'");
  }
  const int d = std::stoi(header_field(header, "dim"));
  const int n = std::stoi(header_field(header, "steps"));
  const double horizon = parse_double(header_field(header, "T"));
  const double alpha = parse_double(header_field(header, "alpha"));
  if (d < 1 || n < 1) throw std::invalid_argument("bad roughpath dimensions");

  Grid grid(horizon, n);
  std::optional<Eigen::MatrixXd> total;

  line = next_content_line(in);
  while (true) {
    auto tokens = split_ws(line);
    if (!tokens.empty() && tokens[0] == "meta") {
      if (info) {
        info->kind = driver_kind_from_string(header_field(tokens, "kind"));
        info->hurst = parse_double(header_field(tokens, "hurst"));
        info->seed = std::stoull(header_field(tokens, "seed"));
        info->fine_factor = std::stoi(header_field(tokens, "fine_factor"));
      }
      line = next_content_line(in);
    } else if (!tokens.empty() && tokens[0] == "total") {
      if (static_cast<int>(tokens.size()) != 1 + d * d) {
        throw std::invalid_argument("total line has wrong arity");
      }
      Eigen::MatrixXd t(d, d);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) t(r, c) = parse_double(tokens[1 + r * d + c]);
      }
      total = std::move(t);
      line = next_content_line(in);
    } else {
      break;
    }
  }

  Eigen::MatrixXd first(d, n + 1);
  for (int i = 0; i <= n; ++i) {
    if (i > 0) line = next_content_line(in);
    auto row = parse_row(line, d);
    for (int r = 0; r < d; ++r) first(r, i) = row[r];
  }
  std::vector<Eigen::MatrixXd> areas(n);
  for (int k = 0; k < n; ++k) {
    auto row = parse_row(next_content_line(in), d * d);
    Eigen::MatrixXd a(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) a(r, c) = row[r * d + c];
    }
    areas[k] = std::move(a);
  }
  RoughPath rough(Path(grid, std::move(first)), std::move(areas), alpha);
  if (info && total) {
    info->total_defect = (rough.chen_area(0, n) - *total).norm();
  }
  return rough;
}

void write_driver(std::ostream& out, const DriverSample& sample) {
  DriverFileInfo info;
  info.kind = sample.kind;
  info.hurst = sample.hurst;
  info.seed = sample.seed;
  info.fine_factor = sample.fine_factor;
  write_rough_path(out, sample.rough, &info);
}

DriverSample read_driver(std::istream& in, DriverFileInfo* info_out) {
  DriverFileInfo info;
  RoughPath rough = read_rough_path(in, &info);
  if (!info.kind) {
    throw std::invalid_argument("driver file is missing the meta line");
  }
  if (info_out) *info_out = info;
  return DriverSample{std::move(rough), *info.kind, info.hurst, info.fine_factor,
                      info.seed};
}

void write_controlled(std::ostream& out, const ControlledPath& cp) {
  write_rough_path(out, cp.reference());
  const int m = cp.block_rows();
  const int c = cp.block_cols();
  const int d = cp.driver_dim();
  const int n = cp.grid().n_steps();
  out << "controlled v1 rows=" << m << " cols=" << c << '\n';
  std::vector<double> row(static_cast<std::size_t>(m) * c);
  for (int i = 0; i <= n; ++i) {
    const Eigen::MatrixXd& y = cp.value(i);
    for (int r = 0; r < m; ++r) {
      for (int cc = 0; cc < c; ++cc) row[r * c + cc] = y(r, cc);
    }
    write_row(out, row.data(), m * c);
  }
  std::vector<double> drow(static_cast<std::size_t>(m) * c * d);
  for (int i = 0; i <= n; ++i) {
    for (int a = 0; a < d; ++a) {
      const Eigen::MatrixXd slice = cp.derivative(i).slice(a);
      for (int r = 0; r < m; ++r) {
        for (int cc = 0; cc < c; ++cc) {
          drow[static_cast<std::size_t>(a) * m * c + r * c + cc] = slice(r, cc);
        }
      }
    }
    write_row(out, drow.data(), m * c * d);
  }
}

ControlledPath read_controlled(std::istream& in, DriverFileInfo* info) {
  auto rough = std::make_shared<RoughPath>(read_rough_path(in, info));
  const int n = rough->grid().n_steps();
  const int d = rough->dim();

  auto header = split_ws(next_content_line(in));
  if (header.size() < 2 || header[0] != "controlled" || header[1] != "v1") {
    throw std::invalid_argument("missing controlled v1 section");
  }
  const int m = std::stoi(header_field(header, "rows"));
  const int c = std::stoi(header_field(header, "cols"));
  PathRole role = c == 1 ? PathRole::State : PathRole::Operator;

  std::vector<Eigen::MatrixXd> values(n + 1);
  for (int i = 0; i <= n; ++i) {
    auto row = parse_row(next_content_line(in), m * c);
    Eigen::MatrixXd y(m, c);
    for (int r = 0; r < m; ++r) {
      for (int cc = 0; cc < c; ++cc) y(r, cc) = row[r * c + cc];
    }
    values[i] = std::move(y);
  }
  std::vector<Tensor3> derivs(n + 1);
  for (int i = 0; i <= n; ++i) {
    auto row = parse_row(next_content_line(in), m * c * d);
    Tensor3 t(m, c, d);
    for (int a = 0; a < d; ++a) {
      Eigen::MatrixXd slice(m, c);
      for (int r = 0; r < m; ++r) {
        for (int cc = 0; cc < c; ++cc) {
          slice(r, cc) = row[static_cast<std::size_t>(a) * m * c + r * c + cc];
        }
      }
      t.set_slice(a, slice);
    }
    derivs[i] = std::move(t);
  }
  return ControlledPath(std::move(rough), std::move(values), std::move(derivs), role);
}

void write_driver_file(const std::string& path, const DriverSample& sample) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_driver(out, sample);
}

DriverSample read_driver_file(const std::string& path, DriverFileInfo* info) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_driver(in, info);
}

}  // namespace roughmild
