#include "eigenwave/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "eigenwave/errors.hpp"

namespace eigenwave {

const char* to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::Interval: return "interval";
    case GeometryKind::Square: return "square";
    case GeometryKind::Box: return "box";
  }
  return "?";
}

const char* to_string(EigensolverKind kind) {
  switch (kind) {
    case EigensolverKind::Arnoldi: return "arnoldi";
    case EigensolverKind::Subspace: return "subspace";
    case EigensolverKind::Power: return "power";
  }
  return "?";
}

const char* to_string(OracleKind kind) {
  return kind == OracleKind::Analytic ? "analytic" : "dense";
}

int RunConfig::dim() const noexcept {
  switch (geometry) {
    case GeometryKind::Interval: return 1;
    case GeometryKind::Square: return 2;
    case GeometryKind::Box: return 3;
  }
  return 2;
}

StructuredGrid RunConfig::grid() const {
  return build_grid(dim(), std::span(extents).first(dim()), std::span(n_cells).first(dim()),
                    order / 2);
}

double RunConfig::filter_omega() const {
  return adjust_omega ? adjusted_omega(omega, n_its) : omega;
}

void RunConfig::validate() const {
  if (order != 2 && order != 4) throw ConfigError("geometry.order must be 2 or 4");
  for (int d = 0; d < dim(); ++d) {
    if (n_cells[d] < 4) throw ConfigError("geometry.cells must be at least 4 on every axis");
    if (!(extents[d].hi > extents[d].lo)) throw ConfigError("geometry.extents: degenerate axis");
  }
  bc.validate();
  if (order == 4)
    for (int d = 0; d < dim(); ++d)
      if (bc.face(d, 0) == BoundaryKind::Neumann || bc.face(d, 1) == BoundaryKind::Neumann)
        throw ConfigError(
            "geometry.bc: order 4 with Neumann faces gives a nonsymmetric operator; use order 2");
  if (!(omega > 0.0)) throw ConfigError("filter.omega must be positive");
  if (n_periods < 1) throw ConfigError("filter.n_periods must be at least 1");
  if (scheme == SchemeKind::Implicit && n_its < 5)
    throw ConfigError("scheme.n_its must be at least 5 time-steps per period");
  if (scheme == SchemeKind::Explicit && (!(cfl > 0.0) || cfl > 1.0))
    throw ConfigError("scheme.cfl must lie in (0, 1]");
  if (scheme == SchemeKind::Explicit && adjust_omega)
    throw ConfigError("filter.adjust_omega applies to the implicit scheme only");
  solver.validate();
  if (n_requested < 1) throw ConfigError("eigensolver.n_requested must be at least 1");
  if (n_arnoldi != 0 && n_arnoldi < n_requested + 1 && eigensolver == EigensolverKind::Arnoldi)
    throw ConfigError("eigensolver.n_arnoldi must exceed n_requested");
  if (n_arnoldi != 0 && n_arnoldi < n_requested)
    throw ConfigError("eigensolver.n_arnoldi must be at least n_requested");
  if (eigensolver == EigensolverKind::Power && n_requested != 1)
    throw ConfigError("eigensolver.n_requested must be 1 for power iteration");
  if (!(tol > 0.0)) throw ConfigError("eigensolver.tol must be positive");
  if (max_restarts < 1) throw ConfigError("eigensolver.max_restarts must be at least 1");
  if (!(cluster_tol > 0.0)) throw ConfigError("oracle.cluster_tol must be positive");
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"geometry", {"kind", "extents", "cells", "order", "bc", "wave_speed"}},
      {"filter", {"omega", "n_periods", "adjust_omega"}},
      {"scheme", {"kind", "n_its", "cfl"}},
      {"solver",
       {"kind", "tol", "max_iterations", "jacobi", "pre_smooth", "post_smooth", "coarsest_cells"}},
      {"eigensolver", {"kind", "n_requested", "n_arnoldi", "tol", "max_restarts", "seed"}},
      {"oracle", {"kind", "cluster_tol"}},
      {"output", {"dir"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (has(key)) os << ":" << line(key);
    os << ": " << key << ": " << msg;
    throw ConfigError(os.str());
  }

  const std::string* raw(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second.value;
  }

  std::string require(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) {
      std::ostringstream os;
      os << source_ << ": missing required key " << key;
      throw ConfigError(os.str());
    }
    return *v;
  }

  double to_double(const std::string& key, const std::string& s) const {
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(key, "expected a number, got '" + s + "'");
    return x;
  }
  long long to_int(const std::string& key, const std::string& s) const {
    long long x = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
      fail(key, "expected an integer, got '" + s + "'");
    return x;
  }

  void get(const std::string& key, double& out) {
    if (auto v = raw(key)) out = to_double(key, *v);
  }
  void get(const std::string& key, int& out) {
    if (auto v = raw(key)) {
      const long long x = to_int(key, *v);
      if (x < -2147483647LL || x > 2147483647LL) fail(key, "integer out of range");
      out = static_cast<int>(x);
    }
  }
  void get(const std::string& key, std::uint64_t& out) {
    if (auto v = raw(key)) {
      const long long x = to_int(key, *v);
      if (x < 0) fail(key, "expected a nonnegative integer");
      out = static_cast<std::uint64_t>(x);
    }
  }
  void get(const std::string& key, bool& out) {
    if (auto v = raw(key)) {
      std::string s = *v;
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
      if (s == "true" || s == "yes" || s == "on" || s == "1") out = true;
      else if (s == "false" || s == "no" || s == "off" || s == "0") out = false;
      else fail(key, "expected a boolean, got '" + *v + "'");
    }
  }
  void get(const std::string& key, std::string& out) {
    if (auto v = raw(key)) out = *v;
  }

  void reject_unused() const {
    for (const auto& [key, e] : entries_)
      if (!e.used) fail(key, "key is not used by this configuration");
  }

 private:
  std::map<std::string, Entry> entries_;
  std::string source_;
};

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::string text;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    std::ostringstream os;
    os << source << ":" << lineno << ": " << msg;
    throw ConfigError(os.str());
  };
  while (std::getline(in, text)) {
    ++lineno;
    // Comments start with '#' or ';'.
    const std::size_t hash = text.find_first_of("#;");
    if (hash != std::string::npos) text.erase(hash);
    const std::string line = trim(text);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) fail("unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    if (section.empty()) fail("key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!schema().at(section).count(key)) fail("unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) fail("empty value for '" + key + "'");
    const std::string full = section + "." + key;
    if (entries.count(full)) fail("duplicate key '" + full + "'");
    entries[full] = Entry{value, lineno, false};
  }

  Reader r(std::move(entries), source);
  RunConfig c;

  const std::string geom = r.require("geometry.kind");
  if (geom == "interval") c.geometry = GeometryKind::Interval;
  else if (geom == "square") c.geometry = GeometryKind::Square;
  else if (geom == "box") c.geometry = GeometryKind::Box;
  else r.fail("geometry.kind", "expected interval, square or box");
  const int dim = c.dim();

  for (int d = 0; d < 3; ++d) c.extents[d] = {0.0, d < dim ? 1.0 : 0.0};
  if (const std::string* v = r.raw("geometry.extents")) {
    const auto items = split_list(*v);
    if (items.size() == 2) {
      for (int d = 0; d < dim; ++d)
        c.extents[d] = {r.to_double("geometry.extents", items[0]),
                        r.to_double("geometry.extents", items[1])};
    } else if (items.size() == static_cast<std::size_t>(2 * dim)) {
      for (int d = 0; d < dim; ++d)
        c.extents[d] = {r.to_double("geometry.extents", items[2 * d]),
                        r.to_double("geometry.extents", items[2 * d + 1])};
    } else {
      r.fail("geometry.extents", "expected lo,hi or one lo,hi pair per axis");
    }
    for (int d = 0; d < dim; ++d)
      if (!(c.extents[d].hi > c.extents[d].lo)) r.fail("geometry.extents", "hi must exceed lo");
  }

  {
    const std::string v = r.require("geometry.cells");
    const auto items = split_list(v);
    if (items.size() != 1 && items.size() != static_cast<std::size_t>(dim))
      r.fail("geometry.cells", "expected one count or one per axis");
    for (int d = 0; d < dim; ++d) {
      const long long n = r.to_int("geometry.cells", items.size() == 1 ? items[0] : items[d]);
      if (n < 4 || n > 1 << 20) r.fail("geometry.cells", "cell counts must lie in [4, 2^20]");
      c.n_cells[d] = static_cast<int>(n);
    }
  }
  r.get("geometry.order", c.order);
  if (c.order != 2 && c.order != 4) r.fail("geometry.order", "must be 2 or 4");
  if (const std::string* v = r.raw("geometry.bc")) {
    const auto items = split_list(*v);
    try {
      if (items.size() == 1) {
        c.bc = BoundaryConditionSpec::all(parse_boundary_kind(items[0]));
      } else if (items.size() == static_cast<std::size_t>(2 * dim)) {
        for (int d = 0; d < dim; ++d)
          for (int s = 0; s < 2; ++s) c.bc.faces[d][s] = parse_boundary_kind(items[2 * d + s]);
      } else {
        r.fail("geometry.bc", "expected one kind or 2*dim kinds (x-lo,x-hi,...)");
      }
    } catch (const ConfigError& e) {
      if (std::string(e.what()).rfind(source, 0) == 0) throw;
      r.fail("geometry.bc", e.what());
    }
  }
  r.get("geometry.wave_speed", c.bc.wave_speed);
  if (!(c.bc.wave_speed > 0.0)) r.fail("geometry.wave_speed", "must be positive");

  c.omega = r.to_double("filter.omega", r.require("filter.omega"));
  if (!(c.omega > 0.0)) r.fail("filter.omega", "must be positive");
  r.get("filter.n_periods", c.n_periods);
  if (c.n_periods < 1) r.fail("filter.n_periods", "must be at least 1");
  r.get("filter.adjust_omega", c.adjust_omega);

  if (const std::string* v = r.raw("scheme.kind")) {
    if (*v == "implicit") c.scheme = SchemeKind::Implicit;
    else if (*v == "explicit") c.scheme = SchemeKind::Explicit;
    else r.fail("scheme.kind", "expected implicit or explicit");
  }
  if (c.scheme == SchemeKind::Explicit) {
    if (r.has("scheme.n_its"))
      r.fail("scheme.n_its", "the explicit scheme takes its step from cfl; n_its is contradictory");
    r.get("scheme.cfl", c.cfl);
    if (!(c.cfl > 0.0) || c.cfl > 1.0) r.fail("scheme.cfl", "must lie in (0, 1]");
    if (c.adjust_omega) r.fail("filter.adjust_omega", "applies to the implicit scheme only");
  } else {
    if (r.has("scheme.cfl"))
      r.fail("scheme.cfl", "the implicit scheme takes its step from n_its; cfl is contradictory");
    r.get("scheme.n_its", c.n_its);
    if (c.n_its < 5)
      r.fail("scheme.n_its", "at least 5 time-steps per period are required (got " +
                                 std::to_string(c.n_its) + ")");
  }

  if (const std::string* v = r.raw("solver.kind")) {
    try {
      c.solver.kind = parse_solver_kind(*v);
    } catch (const ConfigError&) {
      r.fail("solver.kind", "expected direct, cg or multigrid");
    }
  }
  r.get("solver.tol", c.solver.tolerance);
  if (!(c.solver.tolerance > 0.0)) r.fail("solver.tol", "must be positive");
  r.get("solver.max_iterations", c.solver.max_iterations);
  if (c.solver.max_iterations < 1) r.fail("solver.max_iterations", "must be at least 1");
  r.get("solver.jacobi", c.solver.jacobi);
  r.get("solver.pre_smooth", c.solver.multigrid.pre_smooth);
  r.get("solver.post_smooth", c.solver.multigrid.post_smooth);
  r.get("solver.coarsest_cells", c.solver.multigrid.coarsest_cells);
  if (c.solver.multigrid.pre_smooth < 0 || c.solver.multigrid.post_smooth < 0)
    r.fail("solver.pre_smooth", "smoothing counts must be nonnegative");
  if (c.solver.multigrid.coarsest_cells < 4) r.fail("solver.coarsest_cells", "must be at least 4");

  if (const std::string* v = r.raw("eigensolver.kind")) {
    if (*v == "arnoldi") c.eigensolver = EigensolverKind::Arnoldi;
    else if (*v == "subspace") c.eigensolver = EigensolverKind::Subspace;
    else if (*v == "power") c.eigensolver = EigensolverKind::Power;
    else r.fail("eigensolver.kind", "expected arnoldi, subspace or power");
  }
  {
    const std::string v = r.require("eigensolver.n_requested");
    const long long nr = r.to_int("eigensolver.n_requested", v);
    if (nr < 1) r.fail("eigensolver.n_requested", "must be at least 1");
    if (nr > 100000) r.fail("eigensolver.n_requested", "too large");
    c.n_requested = static_cast<int>(nr);
  }
  r.get("eigensolver.n_arnoldi", c.n_arnoldi);
  if (r.has("eigensolver.n_arnoldi") && c.n_arnoldi < c.n_requested + 1)
    r.fail("eigensolver.n_arnoldi", "must exceed n_requested");
  r.get("eigensolver.tol", c.tol);
  if (!(c.tol > 0.0)) r.fail("eigensolver.tol", "must be positive");
  r.get("eigensolver.max_restarts", c.max_restarts);
  if (c.max_restarts < 1) r.fail("eigensolver.max_restarts", "must be at least 1");
  r.get("eigensolver.seed", c.seed);
  if (c.eigensolver == EigensolverKind::Power && c.n_requested != 1)
    r.fail("eigensolver.n_requested", "power iteration computes exactly one pair");

  if (const std::string* v = r.raw("oracle.kind")) {
    if (*v == "analytic") c.oracle = OracleKind::Analytic;
    else if (*v == "dense") c.oracle = OracleKind::Dense;
    else r.fail("oracle.kind", "expected analytic or dense");
  }
  r.get("oracle.cluster_tol", c.cluster_tol);
  if (!(c.cluster_tol > 0.0)) r.fail("oracle.cluster_tol", "must be positive");

  r.get("output.dir", c.out_dir);

  r.reject_unused();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

RunConfig make_box_config(int dim, int n, double omega, int n_requested, int order) {
  RunConfig c;
  c.geometry = dim == 1 ? GeometryKind::Interval : dim == 2 ? GeometryKind::Square : GeometryKind::Box;
  for (int d = 0; d < 3; ++d) {
    c.extents[d] = {0.0, d < dim ? 1.0 : 0.0};
    c.n_cells[d] = d < dim ? n : 0;
  }
  c.order = order;
  c.omega = omega;
  c.n_requested = n_requested;
  return c;
}

}  // namespace eigenwave
