#include "duality/family.hpp"

#include <cmath>
#include <sstream>

#include "duality/errors.hpp"

namespace duality {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::SEP: return "SEP";
    case Family::SIP: return "SIP";
    case Family::IRW: return "IRW";
    case Family::BEP: return "BEP";
    case Family::BMP: return "BMP";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "SEP") return Family::SEP;
  if (name == "SIP") return Family::SIP;
  if (name == "IRW") return Family::IRW;
  if (name == "BEP") return Family::BEP;
  if (name == "BMP") return Family::BMP;
  throw Error(ErrorKind::BadParamRange, "unknown family '" + std::string(name) + "'");
}

std::optional<double> Params::get(std::string_view name) const {
  if (name == "j") return j;
  if (name == "p") return p;
  if (name == "k") return k;
  if (name == "c") return c;
  if (name == "lambda") return lambda;
  if (name == "theta") return theta;
  throw Error(ErrorKind::UnknownSymbol, "unknown parameter '" + std::string(name) + "'");
}

double Params::require(std::string_view name) const {
  auto value = get(name);
  if (!value) throw Error(ErrorKind::MissingParam, "parameter '" + std::string(name) + "' is required");
  return *value;
}

void Params::set(std::string_view name, double value) {
  validate_param(name, value);
  if (name == "j") j = value;
  else if (name == "p") p = value;
  else if (name == "k") k = value;
  else if (name == "c") c = value;
  else if (name == "lambda") lambda = value;
  else if (name == "theta") theta = value;
  else throw Error(ErrorKind::UnknownSymbol, "unknown parameter '" + std::string(name) + "'");
}

void validate_param(std::string_view name, double value) {
  auto bad = [&](const char* range) {
    std::ostringstream os;
    os << name << "=" << value << " outside " << range;
    throw Error(ErrorKind::BadParamRange, os.str());
  };
  if (!std::isfinite(value)) bad("finite reals");
  if (name == "p" || name == "c") {
    if (!(value > 0.0 && value < 1.0)) bad("(0,1)");
  } else if (name == "k" || name == "lambda" || name == "theta") {
    if (!(value > 0.0)) bad("(0,inf)");
  } else if (name == "j") {
    const double twice = 2.0 * value;
    if (!(value > 0.0) || std::abs(twice - std::round(twice)) > 1e-12) bad("positive half-integers");
  }
}

std::map<std::string, double> Params::as_map() const {
  std::map<std::string, double> out;
  for (auto name : {"j", "p", "k", "c", "lambda", "theta"})
    if (auto v = get(name)) out[name] = *v;
  return out;
}

int sep_capacity(const Params& params) {
  return static_cast<int>(std::lround(2.0 * params.require("j")));
}

KernelId::KernelId(Family family, Params params) : family_(family), params_(std::move(params)) {
  for (auto name : {"j", "p", "k", "c", "lambda", "theta"}) {
    if (auto v = params_.get(name)) validate_param(name, *v);
  }
  switch (family_) {
    case Family::SEP: params_.require("j"); params_.require("p"); break;
    case Family::SIP: params_.require("k"); params_.require("c"); break;
    case Family::IRW: params_.require("lambda"); break;
    case Family::BEP: params_.require("k"); break;
    case Family::BMP: break;
  }
}

std::string KernelId::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  for (auto name : {"j", "p", "k", "c", "lambda", "theta"}) {
    if (auto v = params_.get(name)) os << ' ' << name << '=' << *v;
  }
  return os.str();
}

}  // namespace duality
