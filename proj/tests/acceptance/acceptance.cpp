// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Suite defaults carry the acceptance configuration.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fragsim/config.hpp"
#include "fragsim/error.hpp"
#include "fragsim/measures.hpp"
#include "fragsim/suites.hpp"

namespace {

using namespace fragsim;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome from_reports(const std::vector<SuiteReport>& reports) {
  Outcome out{true, {}};
  for (const auto& r : reports) {
    out.pass = out.pass && r.pass;
    for (const auto& c : r.checks) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s%s.%s=%.6g%s%.6g", out.detail.empty() ? "" : "; ", r.suite.c_str(),
                    c.name.c_str(), c.statistic, c.relation.c_str(), c.threshold);
      out.detail += buf;
    }
  }
  return out;
}

Outcome suites(std::initializer_list<const char*> names) {
  std::vector<SuiteReport> reports;
  for (const char* n : names) reports.push_back(run_suite(n, Config{}));
  return from_reports(reports);
}

// Oracles for the binary power law built from the density a x^{-a-1} on
// (0, 1/2] alone, without the closed forms in the library.
double oracle_tail(double a, double x) {
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [a](double v) { return a * std::exp(-a * v); };  // x = e^v
  return gauss_kronrod<double, 61>::integrate(f, std::log(x), std::log(0.5), 15, 1e-15);
}

double oracle_dust(double a) {
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [a](double v) { return a * std::exp((1.0 - a) * v); };
  return gauss_kronrod<double, 61>::integrate(f, -745.0, std::log(0.5), 15, 1e-15);
}

double oracle_inverse(double a, double y) {
  const auto g = [&](double v) { return oracle_tail(a, std::exp(v)) - y; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [lo, hi] = boost::math::tools::bisect(g, -60.0, std::log(0.5), tol, iters);
  return std::exp(0.5 * (lo + hi));
}

Outcome analytics() {
  const DislocationLaw law = DislocationLaw::binary_power(0.5);
  const double tail = tail_nu2(law, 0.25);
  const double dust = dust_integral(law);
  const double f = gen_inverse_f(law, 100.0);
  bool pass = std::abs(tail - oracle_tail(0.5, 0.25)) < 1e-6 && std::abs(tail - 0.5857864) < 1e-6;
  pass = pass && std::abs(dust - oracle_dust(0.5)) < 1e-6 && std::abs(dust - 0.7071068) < 1e-6;
  pass = pass && std::abs(f - oracle_inverse(0.5, 100.0)) < 1e-6 && std::abs(f - 9.7230e-5) < 1e-6;
  int galois_violations = 0;
  for (int i = 0; i < 100; ++i) {
    const double y = std::pow(10.0, -2.0 + 8.0 * i / 99.0);
    const double fy = gen_inverse_f(law, y);
    if (tail_nu2(law, fy) > y * (1 + 1e-12)) ++galois_violations;
    if (tail_nu2(law, fy * (1 - 1e-9)) <= y) ++galois_violations;
    const double x = std::pow(10.0, -8.0 + 7.5 * i / 99.0);
    if (gen_inverse_f(law, tail_nu2(law, x)) > x * (1 + 1e-12)) ++galois_violations;
  }
  pass = pass && galois_violations == 0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "tail(0.25)=%.9g dust=%.9g f(100)=%.9g galois_violations=%d", tail, dust, f,
                galois_violations);
  return {pass, buf};
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"S1", "erosion exactness", [] { return suites({"erosion"}); }},
      {"S2", "conservation and monotonicity", [] { return suites({"conservation"}); }},
      {"S3", "Poisson event counts", [] { return suites({"poisson-counts"}); }},
      {"S4", "record law", [] { return suites({"records"}); }},
      {"S5", "sandwich bound", [] { return suites({"sandwich"}); }},
      {"S6", "subordinator transform", [] { return suites({"subordinator"}); }},
      {"S7", "extreme limits", [] { return suites({"extreme", "frechet-k"}); }},
      {"S8", "ranked/partition correspondence", [] { return suites({"correspondence"}); }},
      {"S9", "scaling property", [] { return suites({"scaling"}); }},
      {"S10", "measure analytics", analytics},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %-4s %-32s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
