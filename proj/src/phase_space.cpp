#include "steerlab/phase_space.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace steerlab {

namespace {

// Splits "key=value,key=value" into a map, rejecting duplicates and junk.
std::map<std::string, std::string> parse_fields(const std::string& body,
                                                const std::string& text) {
  std::map<std::string, std::string> fields;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const std::size_t comma = body.find(',', pos);
    const std::string item =
        body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
      throw std::invalid_argument("bad state descriptor '" + text +
                                  "': expected key=value fields");
    const std::string key = item.substr(0, eq);
    if (!fields.emplace(key, item.substr(eq + 1)).second)
      throw std::invalid_argument("bad state descriptor '" + text +
                                  "': duplicate field '" + key + "'");
    pos = comma == std::string::npos ? body.size() : comma + 1;
  }
  return fields;
}

double parse_real(const std::string& value, const std::string& text) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || !std::isfinite(out))
    throw std::invalid_argument("bad state descriptor '" + text +
                                "': cannot parse number '" + value + "'");
  return out;
}

int parse_index(const std::string& value, const std::string& text) {
  const double real = parse_real(value, text);
  const int index = static_cast<int>(std::lround(real));
  if (real != static_cast<double>(index))
    throw std::invalid_argument("bad state descriptor '" + text +
                                "': mode index '" + value + "' is not an integer");
  return index;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

StateDescriptor parse_descriptor(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("bad state descriptor '" + text +
                                "': expected family:key=value[,...]");
  const std::string family = text.substr(0, colon);
  auto fields = parse_fields(text.substr(colon + 1), text);

  auto take = [&](const char* key) {
    auto it = fields.find(key);
    if (it == fields.end())
      throw std::invalid_argument("bad state descriptor '" + text +
                                  "': missing field '" + std::string(key) + "'");
    std::string value = it->second;
    fields.erase(it);
    return value;
  };
  auto done = [&] {
    if (!fields.empty())
      throw std::invalid_argument("bad state descriptor '" + text +
                                  "': unknown field '" + fields.begin()->first + "'");
  };

  if (family == "tmsv" || family == "psub") {
    const double r = parse_real(take("r"), text);
    done();
    if (r < 0.0)
      throw std::domain_error("state '" + text + "': squeezing r must be >= 0");
    if (family == "tmsv") return Tmsv{r};
    return PhotonSubtracted{r};
  }
  if (family == "lg") {
    const int m = parse_index(take("m"), text);
    const int n = parse_index(take("n"), text);
    done();
    if (m < 0 || n < 0)
      throw std::domain_error("state '" + text + "': mode indices must be >= 0");
    return LaguerreGauss{m, n};
  }
  throw std::invalid_argument("bad state descriptor '" + text +
                              "': unknown family '" + family + "'");
}

std::string descriptor_label(const StateDescriptor& desc) {
  if (const auto* t = std::get_if<Tmsv>(&desc)) return "tmsv:r=" + format_real(t->r);
  if (const auto* p = std::get_if<PhotonSubtracted>(&desc))
    return "psub:r=" + format_real(p->r);
  const auto& lg = std::get<LaguerreGauss>(desc);
  return "lg:m=" + std::to_string(lg.m) + ",n=" + std::to_string(lg.n);
}

double descriptor_param(const StateDescriptor& desc) {
  if (const auto* t = std::get_if<Tmsv>(&desc)) return t->r;
  if (const auto* p = std::get_if<PhotonSubtracted>(&desc)) return p->r;
  return static_cast<double>(std::get<LaguerreGauss>(desc).n);
}

double recommended_halfwidth(const StateDescriptor& desc) {
  if (const auto* t = std::get_if<Tmsv>(&desc))
    return 6.0 * std::sqrt(std::cosh(2.0 * t->r));
  if (const auto* p = std::get_if<PhotonSubtracted>(&desc))
    return 6.0 * std::sqrt(std::cosh(2.0 * p->r));
  return 6.0;
}

double wigner_tmsv(double r, const PhaseSpacePoint& p) {
  if (r < 0.0) throw std::domain_error("wigner_tmsv: squeezing r must be >= 0");
  return TmsvWigner(r)(p);
}

double wigner_photon_subtracted(double r, const PhaseSpacePoint& p) {
  if (r < 0.0)
    throw std::domain_error("wigner_photon_subtracted: squeezing r must be >= 0");
  return PhotonSubtractedWigner(r)(p);
}

double wigner_lg(int m, int n, const PhaseSpacePoint& p) {
  if (m < 0 || n < 0) throw std::domain_error("wigner_lg: mode indices must be >= 0");
  return LgWigner(m, n)(p);
}

double wigner(const StateDescriptor& desc, const PhaseSpacePoint& p) {
  if (const auto* t = std::get_if<Tmsv>(&desc)) return TmsvWigner(t->r)(p);
  if (const auto* ps = std::get_if<PhotonSubtracted>(&desc))
    return PhotonSubtractedWigner(ps->r)(p);
  const auto& lg = std::get<LaguerreGauss>(desc);
  return LgWigner(lg.m, lg.n)(p);
}

}  // namespace steerlab
