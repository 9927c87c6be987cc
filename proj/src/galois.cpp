#include "ergo/galois.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "ergo/errors.hpp"

namespace ergo {

GaloisConnection::GaloisConnection(SupportSpec support, bool debug_crosscheck)
    : support_(std::move(support)),
      merged_plus_(merge_primes(build_g_plus(support_))),
      merged_minus_(merge_primes(build_g_minus(support_))),
      debug_crosscheck_(debug_crosscheck) {}

Subset GaloisConnection::phi(Subset I) const {
  if (!I.fits(n()) || !in_lower(I))
    throw PreconditionError("phi is only defined on the lower lattice");
  const Subset J = reach(merged_minus_, I).states.complement(n());
  if (debug_crosscheck_ && J != phi_by_kleene(I))
    throw NumericError("phi: hypergraph and Boolean Kleene routes disagree");
  return J;
}

Subset GaloisConnection::phi_star(Subset J) const {
  if (!J.fits(n()) || !in_upper(J))
    throw PreconditionError("phi_star is only defined on the upper lattice");
  const Subset I = reach(merged_plus_, J).states.complement(n());
  if (debug_crosscheck_ && I != phi_star_by_kleene(J))
    throw NumericError("phi_star: hypergraph and Boolean Kleene routes disagree");
  return I;
}

Subset GaloisConnection::closure(Subset I) const {
  const Subset J = phi(I);
  if (J.is_empty()) throw PreconditionError("closure needs phi(I) to be nonempty");
  return phi_star(J);
}

Subset GaloisConnection::phi_by_kleene(Subset I) const {
  if (!in_lower(I)) throw PreconditionError("phi is only defined on the lower lattice");
  return boolean_kleene(lower_abstraction(support_), I.complement(n()));
}

Subset GaloisConnection::phi_star_by_kleene(Subset J) const {
  if (!in_upper(J)) throw PreconditionError("phi_star is only defined on the upper lattice");
  return boolean_kleene(upper_abstraction(support_), J).complement(n());
}

Subset phi(const SupportSpec& support, Subset I) { return GaloisConnection(support).phi(I); }

Subset phi_star(const SupportSpec& support, Subset J) {
  return GaloisConnection(support).phi_star(J);
}

Subset closure(const SupportSpec& support, Subset I) {
  return GaloisConnection(support).closure(I);
}

std::vector<SubsetPair> conjugate_pairs(const SupportSpec& support, int guard) {
  const LatticePair lattices = enumerate_lattices(support, guard);
  const GaloisConnection galois(support);
  std::vector<SubsetPair> out;
  for (Subset I : lattices.lower) {
    if (I.is_empty()) continue;
    const Subset J = galois.phi(I);
    if (J.is_empty()) continue;
    if (galois.phi_star(J) == I) out.emplace_back(I, J);
  }
  return out;
}

std::vector<SubsetPair> nontrivial_boolean_fixed_points(const SupportSpec& support, int guard) {
  const LatticePair lattices = enumerate_lattices(support, guard);
  std::vector<SubsetPair> out;
  for (Subset I : lattices.lower) {
    if (I.is_empty()) continue;
    for (Subset J : lattices.upper)
      if (!J.is_empty() && !I.intersects(J)) out.emplace_back(I, J);
  }
  return out;
}

namespace {

bool has_nonempty_phi(const GaloisConnection& galois, Subset I) {
  return galois.in_lower(I) && !galois.phi(I).is_empty();
}

// Index of the first hit among `candidates`, or candidates.size().
std::size_t first_hit(const GaloisConnection& galois, const std::vector<Subset>& candidates,
                      int jobs) {
  const std::size_t total = candidates.size();
  if (jobs <= 1 || total < 1024) {
    for (std::size_t k = 0; k < total; ++k)
      if (has_nonempty_phi(galois, candidates[k])) return k;
    return total;
  }
  std::atomic<std::size_t> best{total};
  const std::size_t chunk = (total + static_cast<std::size_t>(jobs) - 1) / static_cast<std::size_t>(jobs);
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    const std::size_t hi = std::min(total, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&, lo, hi] {
      for (std::size_t k = lo; k < hi && k < best.load(); ++k) {
        if (has_nonempty_phi(galois, candidates[k])) {
          std::size_t cur = best.load();
          while (k < cur && !best.compare_exchange_weak(cur, k)) {
          }
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  return best.load();
}

}  // namespace

ErgodicityReport is_ergodic(const SupportSpec& support, const ErgodicityOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (support.n > options.guard && !options.guard_override)
    throw GuardError("ergodicity check over " + std::to_string(support.n) +
                     " states exceeds the guard of " + std::to_string(options.guard) +
                     " (use the guard override)");
  const GaloisConnection galois(support, options.debug_crosscheck);
  ErgodicityReport report;
  long long examined = 0;
  std::optional<Subset> hit;
  for (int k = 1; k < support.n && !hit; ++k) {
    if (options.jobs <= 1) {
      for_each_subset_of_size(support.n, k, [&](Subset s) {
        ++examined;
        if (!has_nonempty_phi(galois, s)) return true;
        hit = s;
        return false;
      });
      continue;
    }
    std::vector<Subset> level;
    for_each_subset_of_size(support.n, k, [&](Subset s) {
      level.push_back(s);
      return true;
    });
    const std::size_t idx = first_hit(galois, level, options.jobs);
    if (idx < level.size()) {
      hit = level[idx];
      examined += static_cast<long long>(idx) + 1;
    } else {
      examined += static_cast<long long>(level.size());
    }
  }
  if (hit) {
    const Subset J = galois.phi(*hit);
    report.ergodic = false;
    report.witness = SubsetPair{galois.phi_star(J), J};
  }
  report.stats.subsets_examined = examined;
  report.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return report;
}

ErgodicityReport is_ergodic(const GameSpec& game, const ErgodicityOptions& options) {
  ErgodicityReport report = is_ergodic(extract_support(game), options);
  if (options.want_fixed_point && report.witness) {
    const Subset I = report.witness->first;
    report.fixed_point_witness =
        kleene_limit_real(recession_operator(game), I.complement(game.size()).indicator(game.size()));
  }
  return report;
}

}  // namespace ergo
