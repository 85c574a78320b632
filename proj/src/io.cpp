#include "afd/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace afd {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

void write_field_csv(std::ostream& os, const Field& f) {
  const Grid& g = f.grid();
  const int d = g.dimension();
  auto header = [&](const char* name, auto get) {
    os << "# " << name;
    for (int i = 0; i < d; ++i) os << ' ' << get(i);
    os << '\n';
  };
  os << "# dimension " << d << '\n';
  header("points", [&](int i) { return std::to_string(g.points(i)); });
  header("half_width", [&](int i) { return g17(g.half_width(i)); });
  header("spacing", [&](int i) { return g17(g.spacing(i)); });
  os << "# time " << g17(f.time()) << '\n';
  for (int i = 0; i < d; ++i) os << 'x' << i + 1 << ',';
  os << "u\n";
  std::string line;
  g.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
    line.clear();
    for (int i = 0; i < d; ++i) {
      line += g17(g.coord(i, idx[i]));
      line += ',';
    }
    line += g17(f[flat]);
    line += '\n';
    os << line;
  });
}

void write_field_csv(const std::filesystem::path& p, const Field& f) {
  auto os = open_out(p);
  write_field_csv(os, f);
}

Field read_field_csv(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  int d = 0;
  std::vector<std::size_t> pts;
  std::vector<double> hw;
  double t = 0.0;
  std::string line;
  while (std::getline(is, line) && !line.empty() && line[0] == '#') {
    std::istringstream ls(line.substr(1));
    std::string key;
    ls >> key;
    if (key == "dimension") {
      ls >> d;
    } else if (key == "points") {
      std::size_t n;
      while (ls >> n) pts.push_back(n);
    } else if (key == "half_width") {
      double h;
      while (ls >> h) hw.push_back(h);
    } else if (key == "time") {
      ls >> t;
    }
  }
  if (d < 1 || static_cast<int>(pts.size()) != d || static_cast<int>(hw.size()) != d) {
    throw std::runtime_error(p.string() + ": malformed field header");
  }
  Field f(Grid(hw, pts), t);
  std::size_t k = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = line.rfind(',');
    if (k >= f.size()) throw std::runtime_error(p.string() + ": too many rows");
    f[k++] = std::stod(line.substr(c + 1));
  }
  if (k != f.size()) throw std::runtime_error(p.string() + ": too few rows");
  return f;
}

void write_diagnostics_csv(std::ostream& os, const RunDiagnostics& d) {
  const std::size_t na = d.m.size();
  os << "t,step,mass,outflow,min,linf";
  for (double p : d.norms_p) os << ",l" << g17(p);
  for (std::size_t i = 0; i < na; ++i) os << ",energy" << i + 1;
  for (std::size_t i = 0; i < na; ++i) os << ",power" << i + 1;
  os << '\n';
  for (const auto& r : d.records) {
    os << g17(r.t) << ',' << r.step << ',' << g17(r.mass) << ',' << g17(r.outflow) << ',' << g17(r.min) << ','
       << g17(r.linf);
    for (double v : r.lp) os << ',' << g17(v);
    for (std::size_t i = 0; i < na; ++i) os << ',' << g17(r.energy[i]);
    for (std::size_t i = 0; i < na; ++i) os << ',' << g17(r.power_integral[i]);
    os << '\n';
  }
}

void write_diagnostics_csv(const std::filesystem::path& p, const RunDiagnostics& d) {
  auto os = open_out(p);
  write_diagnostics_csv(os, d);
}

RunDiagnostics read_diagnostics_csv(const std::filesystem::path& p, std::vector<double> m) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  RunDiagnostics d;
  d.m = std::move(m);
  const std::size_t na = d.m.size();
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(p.string() + ": empty diagnostics file");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  if (cols.size() < 6 + 2 * na) throw std::runtime_error(p.string() + ": diagnostics header does not match m");
  const std::size_t np = cols.size() - 6 - 2 * na;
  for (std::size_t k = 0; k < np; ++k) d.norms_p.push_back(std::stod(cols[6 + k].substr(1)));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) v.push_back(std::stod(c));
    if (v.size() != cols.size()) throw std::runtime_error(p.string() + ": ragged diagnostics row");
    DiagnosticsRecord r;
    r.t = v[0];
    r.step = static_cast<std::size_t>(v[1]);
    r.mass = v[2];
    r.outflow = v[3];
    r.min = v[4];
    r.linf = v[5];
    r.lp.assign(v.begin() + 6, v.begin() + 6 + np);
    for (std::size_t i = 0; i < na; ++i) {
      r.energy[i] = v[6 + np + i];
      r.power_integral[i] = v[6 + np + na + i];
    }
    d.records.push_back(std::move(r));
  }
  return d;
}

std::string git_blob_hash(const std::string& content) {
  const std::string head = "blob " + std::to_string(content.size()) + '\0';
  const std::string data = head + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    const unsigned char b = md[k];
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

std::string file_blob_hash(const std::filesystem::path& p) { return git_blob_hash(slurp(p)); }

nlohmann::json exponent_table(const ExponentSet& e) {
  nlohmann::json j;
  j["N"] = e.dimension();
  j["m"] = std::vector<double>(e.m().begin(), e.m().end());
  j["alpha"] = e.alpha();
  j["sigma"] = std::vector<double>(e.sigma().begin(), e.sigma().end());
  j["a"] = std::vector<double>(e.a().begin(), e.a().end());
  j["m_c"] = e.mc();
  j["m_bar"] = e.mbar();
  j["gamma"] = std::vector<double>(e.gamma_stat().begin(), e.gamma_stat().end());
  j["beta"] = e.beta();
  return j;
}

void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
  auto os = open_out(p);
  os << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace afd
