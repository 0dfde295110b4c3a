#include "fragsim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "fragsim/error.hpp"
#include "fragsim/text.hpp"

namespace fragsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double second(const RelativeMasses& s) { return s.size() > 1 ? s[1] : 0.0; }

double bd_tail(const BrennanDurrett& bd, double x) {
  if (x <= 0.0) return 1.0;
  if (x > 0.5) return 0.0;
  const double v = boost::math::ibeta(bd.p, bd.q, 1.0 - x) - boost::math::ibeta(bd.p, bd.q, x);
  return std::max(0.0, v);
}

double integrate(auto&& f, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

}  // namespace

DislocationLaw DislocationLaw::atomic(std::vector<WeightedAtom> atoms) {
  for (auto& atom : atoms) {
    if (!(atom.weight > 0.0) || !std::isfinite(atom.weight)) {
      throw Error(ErrorCode::InvalidMeasure, "atom weight must be positive and finite");
    }
    while (!atom.s.empty() && atom.s.back() == 0.0) atom.s.pop_back();
    try {
      validate_relative(atom.s);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidMeasure, std::string("atom outside the ranked simplex: ") + e.what());
    }
    if (atom.s.size() == 1 && atom.s[0] == 1.0) {
      throw Error(ErrorCode::InvalidMeasure, "atom at (1, 0, ...) is not allowed");
    }
  }
  return DislocationLaw(FiniteAtomic{std::move(atoms)});
}

DislocationLaw DislocationLaw::binary_power(double a) {
  if (a >= 1.0) throw Error(ErrorCode::DivergentMeasure, "binary power law needs a < 1 (dust integral diverges)");
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidMeasure, "binary power law needs a > 0");
  return DislocationLaw(BinaryPowerLaw{a});
}

DislocationLaw DislocationLaw::brennan_durrett(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw Error(ErrorCode::InvalidMeasure, "Beta parameters must be positive");
  }
  return DislocationLaw(BrennanDurrett{p, q});
}

bool DislocationLaw::is_binary() const {
  return std::visit(overloaded{[](const FiniteAtomic& f) {
                                 return std::all_of(f.atoms.begin(), f.atoms.end(),
                                                    [](const WeightedAtom& a) { return a.s.size() <= 2; });
                               },
                               [](const auto&) { return true; }},
                    family_);
}

bool DislocationLaw::infinite_activity() const { return std::holds_alternative<BinaryPowerLaw>(family_); }

bool DislocationLaw::is_zero() const {
  const auto* f = std::get_if<FiniteAtomic>(&family_);
  return f != nullptr && f->atoms.empty();
}

std::string DislocationLaw::describe() const {
  std::ostringstream out;
  std::visit(overloaded{[&](const FiniteAtomic& f) {
                          out << "measure = atomic; atoms = ";
                          for (std::size_t i = 0; i < f.atoms.size(); ++i) {
                            if (i) out << ';';
                            out << text::format_shortest(f.atoms[i].weight) << ':';
                            for (std::size_t j = 0; j < f.atoms[i].s.size(); ++j) {
                              if (j) out << ',';
                              out << text::format_shortest(f.atoms[i].s[j]);
                            }
                          }
                        },
                        [&](const BinaryPowerLaw& b) { out << "measure = binary_power; a = " << text::format_shortest(b.a); },
                        [&](const BrennanDurrett& b) {
                          out << "measure = brennan_durrett; p = " << text::format_shortest(b.p)
                              << "; q = " << text::format_shortest(b.q);
                        }},
             family_);
  return out.str();
}

double tail_nu2(const DislocationLaw& law, double x) {
  return std::visit(overloaded{[x](const FiniteAtomic& f) {
                                 double sum = 0.0;
                                 for (const auto& atom : f.atoms) {
                                   if (second(atom.s) >= x) sum += atom.weight;
                                 }
                                 return sum;
                               },
                               [x](const BinaryPowerLaw& b) {
                                 if (x > 0.5) return 0.0;
                                 if (x <= 0.0) return HUGE_VAL;
                                 return std::max(0.0, std::pow(x, -b.a) - std::pow(2.0, b.a));
                               },
                               [x](const BrennanDurrett& b) { return bd_tail(b, x); }},
                    law.family());
}

double tail_nu2_strict(const DislocationLaw& law, double x) {
  if (const auto* f = std::get_if<FiniteAtomic>(&law.family())) {
    double sum = 0.0;
    for (const auto& atom : f->atoms) {
      if (second(atom.s) > x) sum += atom.weight;
    }
    return sum;
  }
  if (x >= 0.5) return 0.0;
  return tail_nu2(law, x);
}

double dust_integral(const DislocationLaw& law) {
  return std::visit(overloaded{[](const FiniteAtomic& f) {
                                 double sum = 0.0;
                                 for (const auto& atom : f.atoms) sum += atom.weight * (1.0 - atom.s.front());
                                 return sum;
                               },
                               [](const BinaryPowerLaw& b) {
                                 return b.a / (1.0 - b.a) * std::pow(0.5, 1.0 - b.a);
                               },
                               [](const BrennanDurrett& b) {
                                 // E[min(V, 1-V)] = integral of P(min >= x) over [0, 1/2].
                                 return integrate([&](double x) { return bd_tail(b, x); }, 0.0, 0.5);
                               }},
                    law.family());
}

double truncated_mass(const DislocationLaw& law, double eps) {
  if (const auto* f = std::get_if<FiniteAtomic>(&law.family())) {
    double sum = 0.0;
    for (const auto& atom : f->atoms) {
      if (1.0 - atom.s.front() >= eps) sum += atom.weight;
    }
    return sum;
  }
  // Binary families: 1 - s1 = s2.
  return tail_nu2(law, eps);
}

double gen_inverse_f(const DislocationLaw& law, double y) {
  if (const auto* b = std::get_if<BinaryPowerLaw>(&law.family())) {
    return std::pow(y + std::pow(2.0, b->a), -1.0 / b->a);
  }
  double lo = 1e-12;
  double hi = 0.5;
  if (tail_nu2(law, hi) > y) return 0.5;
  if (tail_nu2(law, lo) <= y) return 0.0;
  // tail(lo) > y >= tail(hi)
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (tail_nu2(law, mid) <= y) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

TruncatedDislocations::TruncatedDislocations(DislocationLaw law, double eps)
    : law_(std::move(law)), eps_(eps), mass_(0.0) {
  if (law_.infinite_activity() && !(eps_ > 0.0)) {
    throw Error(ErrorCode::EmptyTruncation, "infinite-activity law needs eps > 0");
  }
  if (const auto* f = std::get_if<FiniteAtomic>(&law_.family())) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f->atoms.size(); ++i) {
      if (1.0 - f->atoms[i].s.front() >= eps_) {
        acc += f->atoms[i].weight;
        cumulative_.push_back(acc);
        kept_.push_back(i);
      }
    }
    mass_ = acc;
  } else {
    mass_ = truncated_mass(law_, eps_);
    if (const auto* bd = std::get_if<BrennanDurrett>(&law_.family()); bd && mass_ > 0.0) {
      const double lo = std::max(eps_, 0.0);
      ibeta_lo_ = boost::math::ibeta(bd->p, bd->q, lo);
      ibeta_hi_ = boost::math::ibeta(bd->p, bd->q, 1.0 - lo);
    }
  }
}

RelativeMasses TruncatedDislocations::sample(Rng& rng) const {
  if (!(mass_ > 0.0)) throw Error(ErrorCode::EmptyTruncation, "nothing left after truncation");
  return std::visit(
      overloaded{[&](const FiniteAtomic& f) {
                   const double u = rng.uniform() * mass_;
                   auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
                   if (it == cumulative_.end()) --it;
                   return f.atoms[kept_[static_cast<std::size_t>(it - cumulative_.begin())]].s;
                 },
                 [&](const BinaryPowerLaw& b) {
                   const double u = rng.uniform();
                   const double x = std::pow(u * mass_ + std::pow(2.0, b.a), -1.0 / b.a);
                   const double s2 = std::clamp(x, eps_, 0.5);
                   return RelativeMasses{1.0 - s2, s2};
                 },
                 [&](const BrennanDurrett& b) {
                   const double u = ibeta_lo_ + rng.uniform() * (ibeta_hi_ - ibeta_lo_);
                   const double v = boost::math::ibeta_inv(b.p, b.q, u);
                   const double s2 = std::clamp(std::min(v, 1.0 - v), std::max(eps_, 0.0), 0.5);
                   return RelativeMasses{1.0 - s2, s2};
                 }},
      law_.family());
}

RelativeMasses sample_dislocation(const DislocationLaw& law, double eps, Rng& rng) {
  return TruncatedDislocations(law, eps).sample(rng);
}

namespace {

std::vector<WeightedAtom> parse_atoms(std::string_view value) {
  std::vector<WeightedAtom> atoms;
  for (auto item : text::split(value, ';')) {
    item = text::trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, "atom '" + std::string(item) + "' must look like w:s1,s2,...");
    }
    WeightedAtom atom{text::parse_double(item.substr(0, colon), "atom weight"),
                      text::parse_double_list(item.substr(colon + 1), "atom mass")};
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

}  // namespace

DislocationLaw law_from_keys(const std::map<std::string, std::string>& keys) {
  const auto find = [&](const char* key) -> const std::string* {
    auto it = keys.find(key);
    return it == keys.end() ? nullptr : &it->second;
  };
  const auto* kind = find("measure");
  if (kind == nullptr) throw Error(ErrorCode::ConfigError, "missing 'measure'");
  const auto need = [&](const char* key) {
    const auto* v = find(key);
    if (v == nullptr) throw Error(ErrorCode::ConfigError, std::string("measure needs '") + key + "'");
    return text::parse_double(*v, key);
  };
  try {
    if (*kind == "atomic") {
      const auto* atoms = find("atoms");
      return DislocationLaw::atomic(atoms ? parse_atoms(*atoms) : std::vector<WeightedAtom>{});
    }
    if (*kind == "none") return DislocationLaw();
    if (*kind == "binary_power") return DislocationLaw::binary_power(need("a"));
    if (*kind == "brennan_durrett") return DislocationLaw::brennan_durrett(need("p"), need("q"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, e.what());
  }
  throw Error(ErrorCode::ConfigError, "unknown measure '" + *kind + "'");
}

DislocationLaw parse_measure(std::string_view spec) {
  // Segments without '=' continue the previous value (extra atoms).
  std::map<std::string, std::string> keys;
  std::string current;
  for (auto seg : text::split(spec, ';')) {
    const auto eq = seg.find('=');
    if (eq == std::string_view::npos) {
      if (current.empty()) {
        if (text::trim(seg).empty()) continue;
        throw Error(ErrorCode::ConfigError, "dangling segment '" + std::string(seg) + "'");
      }
      keys[current] += ";" + std::string(text::trim(seg));
      continue;
    }
    current = std::string(text::trim(seg.substr(0, eq)));
    keys[current] = std::string(text::trim(seg.substr(eq + 1)));
  }
  return law_from_keys(keys);
}

}  // namespace fragsim
