// Compares the serial reference validity scan against the OpenMP kernel on
// assignment spaces of growing size. Both must find the same first
// countermodel index; the serial path is the correctness baseline kept for
// testing.

#include <chrono>
#include <iostream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ptt/quote.hpp"
#include "ptt/semantics.hpp"

using namespace ptt;
using Clock = std::chrono::steady_clock;

namespace {

double run_ms(ScanMode mode, const AssignmentSpace& space,
              const std::vector<Term>& assumptions, const Term& conclusion,
              std::optional<std::uint64_t>& out) {
  auto t0 = Clock::now();
  out = first_failing_index(space, assumptions, conclusion, mode);
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Case {
  std::string name;
  std::vector<VarName> vars;
  Term formula;
};

}  // namespace

int main() {
  TypeExpr B = TypeExpr::base();
  TypeExpr BB = TypeExpr::arrow(B, B);
  TypeExpr B2B = TypeExpr::arrow(BB, B);

  VarName x("x", B), y("y", B), f("f", BB), g("g", BB);
  VarName p("p", B2B), q("q", B2B), r("r", B2B), s("s", B2B);

  auto fx = Term::app(Term::var(f), Term::var(x));
  auto gfx = Term::app(Term::var(g), fx);

  std::vector<Case> cases;
  // 4 * 4 * 2 = 32 assignments.
  cases.push_back({"g(f x) => g(f x)            (32 rows)",
                   {x, f, g},
                   Term::imp(gfx, gfx)});
  // 16 * 16 * 4 * 2 = 2048 assignments.
  cases.push_back(
      {"p f <=> p f, q free          (2k rows)",
       {f, p, q, x},
       Term::imp(Term::var(x),
                 equiv(Term::app(Term::var(p), Term::var(f)),
                       disj(Term::app(Term::var(p), Term::var(f)),
                            Term::app(Term::var(q), Term::var(f)))))});
  // 16^4 = 65536 assignments at the default guard limit.
  Term pf = Term::app(Term::var(p), Term::var(f));
  Term qf = Term::app(Term::var(q), Term::var(f));
  Term rf = Term::app(Term::var(r), Term::var(f));
  Term sf = Term::app(Term::var(s), Term::var(f));
  cases.push_back({"4 predicates over B->B       (64k rows)",
                   {f, p, q, r, s},
                   Term::imp(conj(conj(pf, qf), conj(rf, sf)), pf)});

#ifdef _OPENMP
  std::cout << "openmp threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "openmp: not enabled\n";
#endif
  std::cout << "case | serial ms | parallel ms | speedup | agree\n";

  for (const auto& c : cases) {
    AssignmentSpace space = AssignmentSpace::over(c.vars);
    std::optional<std::uint64_t> serial_idx, parallel_idx;
    // Warm up once, then take the best of three.
    double best_s = 1e18, best_p = 1e18;
    for (int i = 0; i < 3; ++i) {
      best_s = std::min(best_s, run_ms(ScanMode::Serial, space, {}, c.formula,
                                       serial_idx));
      best_p = std::min(best_p, run_ms(ScanMode::Parallel, space, {},
                                       c.formula, parallel_idx));
    }
    bool agree = serial_idx == parallel_idx;
    std::cout << c.name << " | " << best_s << " | " << best_p << " | "
              << (best_p > 0 ? best_s / best_p : 0.0) << " | "
              << (agree ? "yes" : "NO") << "\n";
    if (!agree) return 1;
  }
  return 0;
}
