#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "sqw/errors.hpp"
#include "sqw/io.hpp"

namespace sqw {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{}) throw ConfigError("csv: cannot parse number '" + s + "'");
  return v;
}

// Reads "# key=value" lines; leaves the stream at the column line.
std::map<std::string, std::string> read_header(std::istream& is) {
  std::map<std::string, std::string> meta;
  std::string line;
  while (is.peek() == '#') {
    std::getline(is, line);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(1, eq - 1);
    key.erase(0, key.find_first_not_of(' '));
    meta[key] = line.substr(eq + 1);
  }
  std::getline(is, line);  // column names
  return meta;
}

const std::string& need(const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw ConfigError("csv: missing header field '" + key + "'");
  return it->second;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_grid_csv(std::ostream& os, const PhaseSpaceGrid& g, const Metadata& extra) {
  const GridSpec& s = g.spec;
  os << "# nx=" << s.nx << "\n# ny=" << s.ny << "\n# center_re=" << format_double(s.center.re)
     << "\n# center_im=" << format_double(s.center.im) << "\n# dx=" << format_double(s.dx)
     << "\n# dy=" << format_double(s.dy) << '\n';
  for (const auto& [k, v] : extra) os << "# " << k << '=' << v << '\n';
  os << "ix,iy,re_alpha,im_alpha,re_value,im_value\n";
  for (int iy = 0; iy < s.ny; ++iy) {
    for (int ix = 0; ix < s.nx; ++ix) {
      const cplx v = g.at(ix, iy);
      os << ix << ',' << iy << ',' << format_double(s.x(ix)) << ',' << format_double(s.y(iy)) << ','
         << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

PhaseSpaceGrid read_grid_csv(std::istream& is) {
  const auto meta = read_header(is);
  GridSpec spec;
  spec.nx = std::stoi(need(meta, "nx"));
  spec.ny = std::stoi(need(meta, "ny"));
  spec.center = {parse_double(need(meta, "center_re")), parse_double(need(meta, "center_im"))};
  spec.dx = parse_double(need(meta, "dx"));
  spec.dy = parse_double(need(meta, "dy"));
  PhaseSpaceGrid g(spec);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ConfigError("grid csv: expected 6 fields, got '" + line + "'");
    const int ix = std::stoi(f[0]);
    const int iy = std::stoi(f[1]);
    if (ix < 0 || iy < 0 || ix >= spec.nx || iy >= spec.ny) throw ConfigError("grid csv: index out of range");
    g.at(ix, iy) = {parse_double(f[4]), parse_double(f[5])};
    ++rows;
  }
  if (rows != spec.size()) throw ConfigError("grid csv: row count does not match nx*ny");
  return g;
}

void save_grid_csv(const std::filesystem::path& path, const PhaseSpaceGrid& g, const Metadata& extra) {
  auto os = open_out(path);
  write_grid_csv(os, g, extra);
}

PhaseSpaceGrid load_grid_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  return read_grid_csv(is);
}

void write_matrix_csv(std::ostream& os, const Matrix& m, const Metadata& meta) {
  os << "# rows=" << m.rows() << "\n# cols=" << m.cols() << '\n';
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  os << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << i << ',' << j << ',' << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag()) << '\n';
}

Matrix read_matrix_csv(std::istream& is) {
  const auto meta = read_header(is);
  Matrix m = Matrix::Zero(std::stoi(need(meta, "rows")), std::stoi(need(meta, "cols")));
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 4) throw ConfigError("matrix csv: expected 4 fields");
    m(std::stoi(f[0]), std::stoi(f[1])) = {parse_double(f[2]), parse_double(f[3])};
  }
  return m;
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m, const Metadata& meta) {
  auto os = open_out(path);
  write_matrix_csv(os, m, meta);
}

}  // namespace sqw
