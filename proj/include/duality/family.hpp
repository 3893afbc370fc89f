#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace duality {

/// The five processes: three particle systems and two diffusions.
enum class Family { SEP, SIP, IRW, BEP, BMP };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

inline bool is_discrete(Family f) { return f == Family::SEP || f == Family::SIP || f == Family::IRW; }

/// Named real parameters. Each family reads the subset it needs:
/// SEP {j, p}, SIP {k, c} (+ p for its stationary law), IRW {lambda},
/// BEP {k} (+ theta for its stationary law), BMP none.
struct Params {
  std::optional<double> j{};
  std::optional<double> p{};
  std::optional<double> k{};
  std::optional<double> c{};
  std::optional<double> lambda{};
  std::optional<double> theta{};

  double require(std::string_view name) const;
  std::optional<double> get(std::string_view name) const;
  void set(std::string_view name, double value);

  /// Present parameters by name.
  std::map<std::string, double> as_map() const;
};

/// Number of particles a SEP(j) site holds at most, i.e. 2j as an integer.
int sep_capacity(const Params& params);

/// A family together with validated parameters. Identifies both a duality
/// kernel and the process it belongs to.
class KernelId {
 public:
  KernelId(Family family, Params params);

  Family family() const { return family_; }
  const Params& params() const { return params_; }

  double j() const { return params_.require("j"); }
  double p() const { return params_.require("p"); }
  double k() const { return params_.require("k"); }
  double c() const { return params_.require("c"); }
  double lambda() const { return params_.require("lambda"); }
  int two_j() const { return sep_capacity(params_); }

  std::string describe() const;

 private:
  Family family_;
  Params params_;
};

/// Throws BadParamRange if a present parameter is outside its admissible range.
void validate_param(std::string_view name, double value);

}  // namespace duality
