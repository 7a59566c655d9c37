#include "slabtrans_app/config.hpp"

#include "slabtrans/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace slabtrans::app
{

namespace
{

std::string
trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double
parse_double(const std::string& text, const std::string& context)
{
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(context + ": expected a number, got '" + text + "'");
  return v;
}

long
parse_integer(const std::string& text, const std::string& context)
{
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(context + ": expected an integer, got '" + text + "'");
  return v;
}

bool
parse_bool(const std::string& text, const std::string& context)
{
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "on" || t == "1")
    return true;
  if (t == "false" || t == "no" || t == "off" || t == "0")
    return false;
  throw ConfigError(context + ": expected true/false, got '" + text + "'");
}

double
positive(double v, const std::string& context)
{
  if (!(v > 0.0))
    throw ConfigError(context + ": value must be positive");
  return v;
}

double
auto_or_positive(const std::string& text, const std::string& context)
{
  return trim(text) == "auto" ? 0.0 : positive(parse_double(text, context), context);
}

} // namespace

std::vector<std::string>
split_list(const std::string& text)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    item = trim(item);
    if (!item.empty())
      out.push_back(item);
  }
  return out;
}

Epsilon
parse_epsilon(const std::string& text, const std::string& context)
{
  const std::string t = trim(text);
  Epsilon e;
  const auto slash = t.find('/');
  if (slash != std::string::npos)
  {
    const long num = parse_integer(t.substr(0, slash), context);
    const long den = parse_integer(t.substr(slash + 1), context);
    if (den <= 0)
      throw ConfigError(context + ": bad denominator in '" + text + "'");
    e.value = static_cast<double>(num) / static_cast<double>(den);
    e.label = std::to_string(num) + "-" + std::to_string(den);
  }
  else
  {
    e.value = parse_double(t, context);
    e.label = t;
    std::replace(e.label.begin(), e.label.end(), '.', 'p');
  }
  if (!(e.value > 0.0 && e.value < 1.0))
    throw ConfigError(context + ": epsilon must lie in (0, 1), got '" + text + "'");
  return e;
}

void
set_cases(RunConfig& config, const std::string& list, const std::string& context)
{
  const auto known = case_ids();
  auto items = split_list(list);
  if (items.empty())
    throw ConfigError(context + ": empty case list");
  for (const auto& c : items)
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw ConfigError(context + ": unknown case '" + c + "'");
  config.cases = std::move(items);
}

void
set_eps(RunConfig& config, const std::string& list, const std::string& context)
{
  const auto items = split_list(list);
  if (items.empty())
    throw ConfigError(context + ": empty epsilon list");
  config.eps.clear();
  for (const auto& s : items)
    config.eps.push_back(parse_epsilon(s, context));
}

RunConfig
default_config()
{
  RunConfig c;
  c.cases = case_ids();
  for (const char* e : {"1/32", "1/64", "1/128", "1/256"})
    c.eps.push_back(parse_epsilon(e, "default"));
  return c;
}

RunConfig
parse_config_text(const std::string& text, const std::string& origin)
{
  RunConfig c = default_config();
  std::istringstream in(text);
  std::string line, section;
  int number = 0;
  while (std::getline(in, line))
  {
    ++number;
    const std::string where = origin + ":" + std::to_string(number);
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() == '[')
    {
      if (line.back() != ']')
        throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* sections[] = {"run", "kernel", "halfspace", "heat", "kinetic", "coupled"};
      if (std::find(std::begin(sections), std::end(sections), section) == std::end(sections))
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError(where + ": key '" + key + "' outside a section");
    const std::string ctx = where + " (" + section + "." + key + ")";
    const std::string k = section + "." + key;

    if (k == "run.cases")
      set_cases(c, value, ctx);
    else if (k == "run.eps")
      set_eps(c, value, ctx);
    else if (k == "run.out")
      c.out_dir = value;
    else if (k == "run.plots")
      c.plots = parse_bool(value, ctx);
    else if (k == "run.threads")
      c.threads = static_cast<int>(parse_integer(value, ctx));
    else if (k == "run.seed")
      c.seed = static_cast<unsigned long>(parse_integer(value, ctx));
    else if (k == "kernel.name")
      c.kernel = value;
    else if (k == "kernel.coefficients")
    {
      c.kernel_coefficients.clear();
      for (const auto& s : split_list(value))
        c.kernel_coefficients.push_back(parse_double(s, ctx));
    }
    else if (k == "halfspace.N")
      c.halfspace_order = static_cast<int>(parse_integer(value, ctx));
    else if (k == "halfspace.alpha")
      c.halfspace_alpha = positive(parse_double(value, ctx), ctx);
    else if (k == "halfspace.quadrature")
      c.halfspace_quadrature = value == "auto" ? 0 : static_cast<int>(parse_integer(value, ctx));
    else if (k == "heat.dx")
      c.heat_dx = positive(parse_double(value, ctx), ctx);
    else if (k == "heat.dt")
      c.heat_dt = positive(parse_double(value, ctx), ctx);
    else if (k == "kinetic.n_mu")
      c.n_mu = static_cast<int>(parse_integer(value, ctx));
    else if (k == "kinetic.dx")
      c.kinetic_dx = auto_or_positive(value, ctx);
    else if (k == "kinetic.cfl")
      c.kinetic_cfl = positive(parse_double(value, ctx), ctx);
    else if (k == "kinetic.dt_cap")
    {
      if (value == "eps2" || value == "ε²")
        c.kinetic_dt_cap = true;
      else if (value == "none")
        c.kinetic_dt_cap = false;
      else
        throw ConfigError(ctx + ": expected 'eps2' or 'none'");
    }
    else if (k == "coupled.x_m")
      c.coupled_xm = parse_double(value, ctx);
    else if (k == "coupled.dx")
      c.coupled_dx = positive(parse_double(value, ctx), ctx);
    else if (k == "coupled.cfl")
      c.coupled_cfl = positive(parse_double(value, ctx), ctx);
    else if (k == "coupled.reference_dx")
      c.coupled_reference_dx = positive(parse_double(value, ctx), ctx);
    else
      throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
  }
  validate(c);
  return c;
}

RunConfig
parse_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError(path + ": cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void
validate(const RunConfig& c)
{
  if (c.cases.empty())
    throw ConfigError("run.cases: no cases selected");
  if (c.eps.empty())
    throw ConfigError("run.eps: no epsilon values");
  if (c.threads < 1)
    throw ConfigError("run.threads: must be at least 1");
  if (c.kernel != "paper" && c.kernel != "isotropic" && c.kernel != "legendre-series")
    throw ConfigError("kernel.name: unknown kernel '" + c.kernel + "'");
  if (c.kernel == "legendre-series" && c.kernel_coefficients.empty())
    throw ConfigError("kernel.coefficients: required for legendre-series");
  if (c.halfspace_order < 2)
    throw ConfigError("halfspace.N: must be at least 2");
  if (c.halfspace_quadrature < 0)
    throw ConfigError("halfspace.quadrature: must be 'auto' or positive");
  if (c.n_mu < 4 || c.n_mu % 2 != 0)
    throw ConfigError("kinetic.n_mu: must be an even number >= 4");
  if (c.kinetic_cfl > 1.0 || c.coupled_cfl > 1.0)
    throw ConfigError("cfl: must not exceed 1");
  if (!(c.coupled_xm > -1.0 && c.coupled_xm < 1.0))
    throw ConfigError("coupled.x_m: must lie in (-1, 1)");
}

} // namespace slabtrans::app
