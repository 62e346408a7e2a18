#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cliffpert/compile.hpp"
#include "cliffpert/pauli.hpp"

namespace cliffpert {

/// Sentinel: truncate at the rotation count (no truncation in practice).
inline constexpr long kFullOrder = -1;

inline constexpr std::uint32_t kNoDampCutoff =
    std::numeric_limits<std::uint32_t>::max();

/// Map key for one evolved term.  The rotation perturbation order is kept
/// outside the key (terms are stored per order); the amplitude-damping
/// order rides along here so its cutoff can be applied independently.
struct TermKey {
  PauliString string;
  std::uint32_t damp = 0;

  bool operator==(const TermKey&) const = default;
};

struct TermKeyHash {
  std::size_t operator()(const TermKey& k) const noexcept {
    std::size_t h = PauliStringHash{}(k.string);
    return (h ^ (h >> 29)) * 0x9e3779b97f4a7c15ull + k.damp;
  }
};

/// The Heisenberg-evolved observable: real coefficients keyed by
/// (Pauli string, rotation order, damping order).  Terms live in shard
/// maps (fixed shard count, key-determined shard) so parallel passes can
/// partition work while keeping every floating-point accumulation in a
/// thread-count-independent order.
class ObservableSum {
 public:
  static constexpr std::size_t kShards = 16;
  using Shard = std::unordered_map<TermKey, double, TermKeyHash>;
  using OrderShards = std::array<Shard, kShards>;

  ObservableSum(std::size_t n, long max_order);

  std::size_t num_qubits() const { return n_; }
  /// Configured truncation order K.
  long max_order() const { return max_order_; }

  static std::size_t shard_of(const TermKey& key) {
    return TermKeyHash{}(key) % kShards;
  }

  /// Accumulate coefficient onto (string, order, damp); removes the entry
  /// again if the result is exactly zero.  Orders above K are ignored.
  void add(const PauliString& string, long order, std::uint32_t damp,
           double coeff);

  OrderShards& order_shards(long k) { return orders_[static_cast<std::size_t>(k)]; }
  const OrderShards& order_shards(long k) const {
    return orders_[static_cast<std::size_t>(k)];
  }

  /// Accumulate into a shard map, maintaining the zero-erasure invariant
  /// and the created-key counter.  `creations` is the caller's counter
  /// slot (one per shard during parallel merges).
  static void accumulate(Shard& shard, const TermKey& key, double delta,
                         std::size_t& creations);

  long highest_order_present() const;
  std::size_t term_count() const;
  std::vector<std::size_t> per_order_term_counts() const;  // size K+1

  std::size_t total_keys_created() const;
  void note_creations(std::size_t count) { external_creations_ += count; }

  /// Visit all terms of one order sorted by (damping order, string); the
  /// canonical order used by reports and serialization.
  void for_each_sorted(
      long order,
      const std::function<void(const TermKey&, double)>& visit) const;

  /// Remove all terms with |coefficient| < threshold.
  void prune_below(double threshold);

 private:
  std::size_t n_ = 0;
  long max_order_ = 0;
  std::vector<OrderShards> orders_;
  std::size_t external_creations_ = 0;
};

/// Per-order breakdown of the truncated expectation value.
struct OrderReport {
  std::vector<double> per_order_value;             // E^(k), k = 0..K
  std::vector<std::size_t> per_order_term_count;   // stored terms at order k
  std::vector<double> cumulative_value;            // <O>^(0..K)
  std::vector<std::size_t> cumulative_term_count;
  std::size_t total_terms_generated = 0;
};

nlohmann::json order_report_to_json(const OrderReport& report);

struct PropagateOptions {
  long order = kFullOrder;
  std::size_t max_terms = 200'000'000;
  double coeff_threshold = 0.0;
  unsigned threads = 1;
  bool allow_wide_angles = false;
  std::uint32_t damp_cutoff = kNoDampCutoff;
};

/// One step of Eq.-style branching: commuting terms pass through,
/// anticommuting terms are cos-scaled and spawn a sin-weighted product
/// term one order higher (dropped beyond the sum's K).
void apply_rotation(ObservableSum& sum, const PauliString& axis, double theta,
                    unsigned threads = 1, bool allow_wide_angles = false);

struct NoiseSpec;  // see noise.hpp

struct PropagationResult {
  ObservableSum sum;
  /// Stored term count after each rotation, in operator order.
  std::vector<std::size_t> per_gate_term_count;
};

/// Back-propagate the program's observable through all rotations (operator
/// order), interleaving any noise channels at their configured locations.
/// Throws ResourceError naming the gate index if max_terms is exceeded.
PropagationResult propagate(const InteractionPictureProgram& program,
                            const PropagateOptions& options = {},
                            const std::vector<NoiseSpec>& noise = {});

/// E^(k) and the running truncated sums from the evolved observable.
std::pair<double, OrderReport> expectation(const ObservableSum& sum);

struct EvaluationResult {
  double value = 0.0;
  OrderReport report;
};

/// propagate + expectation in one call.
EvaluationResult evaluate(const InteractionPictureProgram& program,
                          const PropagateOptions& options = {},
                          const std::vector<NoiseSpec>& noise = {});

/// Drop rotations that can never anticommute with any term reachable from
/// the observable.  Tracks, per qubit, which Pauli factors can occur;
/// removing a rotation that fails the test leaves the expectation exactly
/// unchanged (removed rotations never touch a coefficient).
InteractionPictureProgram lightcone_filter(
    const InteractionPictureProgram& program);

/// Shared parallel-for: stripes [0, count) over at most `threads` workers.
/// The work assignment is fixed by (index -> worker) so results that are
/// reduced per index never depend on the worker count.
void parallel_over(std::size_t count, unsigned threads,
                   const std::function<void(std::size_t)>& fn);

}  // namespace cliffpert
