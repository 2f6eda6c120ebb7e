#include "ds2/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ds2/errors.hpp"

namespace ds2 {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string &key, const std::string &v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size())
      throw DomainError("");
    return d;
  } catch (const std::exception &) {
    throw DomainError("config key '" + key + "' expects a number, got '" + v + "'");
  }
}

int to_int(const std::string &key, const std::string &v) {
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw DomainError("config key '" + key + "' expects an integer, got '" + v + "'");
  return x;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

} // namespace

RunConfig RunConfig::load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw DomainError("cannot open config file " + path);
  RunConfig c;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError(path + ":" + std::to_string(n) + ": expected key = value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  c.validate();
  return c;
}

void RunConfig::set(const std::string &key, const std::string &v) {
  if (key == "R")
    R = to_double(key, v);
  else if (key == "resolution")
    resolution = v;
  else if (key == "window_frac")
    window_frac = to_double(key, v);
  else if (key == "delta_frac")
    delta_frac = to_double(key, v);
  else if (key == "eps_levels") {
    eps_levels.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
      eps_levels.push_back(to_double(key, trim(item)));
  } else if (key == "basis_size")
    basis_size = to_int(key, v);
  else if (key == "fock_modes")
    fock_modes = to_int(key, v);
  else if (key == "fock_particles")
    fock_particles = to_int(key, v);
  else if (key == "convention")
    convention = v;
  else if (key == "kappa")
    kappa = v;
  else if (key == "out")
    out = v;
  else if (key == "seed") {
    const auto r = std::from_chars(v.data(), v.data() + v.size(), seed);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      throw DomainError("config key 'seed' expects an unsigned integer, got '" + v + "'");
  } else if (key == "lambda_min")
    lambda_min = to_double(key, v);
  else if (key == "lambda_max")
    lambda_max = to_double(key, v);
  else if (key == "lambda_points")
    lambda_points = to_int(key, v);
  else if (key == "kernel_alpha")
    kernel_alpha = v;
  else
    throw DomainError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
  if (!(R > 0.0))
    throw DomainError("R must be positive");
  grid_resolution();
  kernel_convention();
  kappa_convention();
  if (eps_levels.size() < 2)
    throw DomainError("eps_levels needs at least two entries");
  for (double e : eps_levels)
    if (!(e > 0.0))
      throw DomainError("eps_levels must be positive");
  if (basis_size < 4)
    throw DomainError("basis_size must be at least 4");
  if (fock_modes < 2 || fock_modes > basis_size + 2)
    throw DomainError("fock_modes must lie in [2, basis_size + 2]");
  if (fock_particles < 3)
    throw DomainError("fock_particles must be at least 3");
  if (!(lambda_max > lambda_min) || lambda_points < 2)
    throw DomainError("empty lambda grid");
  if (kernel_alpha != "massless") {
    const double a = to_double("kernel_alpha", kernel_alpha);
    if (!(a > 0.0 && a <= 0.5))
      throw DomainError("kernel_alpha must be massless or lie in (0, 1/2]");
  }
  grid().validate();
}

Resolution RunConfig::grid_resolution() const {
  if (resolution == "half")
    return Resolution::half;
  if (resolution == "default")
    return Resolution::standard;
  if (resolution == "double")
    return Resolution::twice;
  throw DomainError("resolution must be half, default or double");
}

GridSpec RunConfig::grid() const {
  GridSpec g = GridSpec::make(R, grid_resolution());
  g.window_frac = window_frac;
  g.delta_frac = delta_frac;
  return g;
}

KernelConvention RunConfig::kernel_convention() const {
  if (convention == "series")
    return {ConstantScheme::series_limit};
  if (convention == "paper")
    return {ConstantScheme::paper_closed_form};
  throw DomainError("convention must be series or paper");
}

KappaConvention RunConfig::kappa_convention() const {
  if (kappa == "derived")
    return KappaConvention::derived;
  if (kappa == "paper")
    return KappaConvention::paper;
  throw DomainError("kappa must be derived or paper");
}

std::map<std::string, std::string> RunConfig::entries() const {
  std::string eps;
  for (std::size_t i = 0; i < eps_levels.size(); ++i)
    eps += (i ? "," : "") + fmt(eps_levels[i]);
  return {{"R", fmt(R)},
          {"resolution", resolution},
          {"window_frac", fmt(window_frac)},
          {"delta_frac", fmt(delta_frac)},
          {"eps_levels", eps},
          {"basis_size", std::to_string(basis_size)},
          {"fock_modes", std::to_string(fock_modes)},
          {"fock_particles", std::to_string(fock_particles)},
          {"convention", convention},
          {"kappa", kappa},
          {"out", out},
          {"seed", std::to_string(seed)},
          {"lambda_min", fmt(lambda_min)},
          {"lambda_max", fmt(lambda_max)},
          {"lambda_points", std::to_string(lambda_points)},
          {"kernel_alpha", kernel_alpha}};
}

std::string RunConfig::to_text() const {
  std::string s;
  for (const auto &[k, v] : entries())
    s += k + " = " + v + "\n";
  return s;
}

} // namespace ds2
