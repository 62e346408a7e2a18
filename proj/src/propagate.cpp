#include "cliffpert/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>

#include "cliffpert/errors.hpp"
#include "cliffpert/noise.hpp"

namespace cliffpert {

namespace {
constexpr double kQuarterPi = 0.7853981633974483;
constexpr double kAngleSlack = 1e-12;
}  // namespace

void parallel_over(std::size_t count, unsigned threads,
                   const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

ObservableSum::ObservableSum(std::size_t n, long max_order) : n_(n) {
  if (max_order < 0) {
    throw SchemaError("ObservableSum: negative truncation order");
  }
  max_order_ = max_order;
  orders_.resize(static_cast<std::size_t>(max_order_) + 1);
}

void ObservableSum::add(const PauliString& string, long order,
                        std::uint32_t damp, double coeff) {
  if (string.num_qubits() != n_) {
    throw DimensionError("ObservableSum::add: term has wrong qubit count");
  }
  if (order < 0 || order > max_order_ || coeff == 0.0) return;
  TermKey key{string, damp};
  accumulate(orders_[static_cast<std::size_t>(order)][shard_of(key)], key,
             coeff, external_creations_);
}

void ObservableSum::accumulate(Shard& shard, const TermKey& key, double delta,
                               std::size_t& creations) {
  auto [it, inserted] = shard.try_emplace(key, delta);
  if (inserted) {
    ++creations;
    return;
  }
  it->second += delta;
  if (it->second == 0.0) shard.erase(it);
}

long ObservableSum::highest_order_present() const {
  for (std::size_t k = orders_.size(); k-- > 0;) {
    for (const auto& shard : orders_[k]) {
      if (!shard.empty()) return static_cast<long>(k);
    }
  }
  return -1;
}

std::size_t ObservableSum::term_count() const {
  std::size_t total = 0;
  for (const auto& order : orders_) {
    for (const auto& shard : order) total += shard.size();
  }
  return total;
}

std::vector<std::size_t> ObservableSum::per_order_term_counts() const {
  std::vector<std::size_t> counts(orders_.size(), 0);
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    for (const auto& shard : orders_[k]) counts[k] += shard.size();
  }
  return counts;
}

std::size_t ObservableSum::total_keys_created() const {
  return external_creations_;
}

void ObservableSum::for_each_sorted(
    long order,
    const std::function<void(const TermKey&, double)>& visit) const {
  if (order < 0 || order > max_order_) return;
  std::vector<const std::pair<const TermKey, double>*> entries;
  for (const auto& shard : orders_[static_cast<std::size_t>(order)]) {
    for (const auto& entry : shard) entries.push_back(&entry);
  }
  std::sort(entries.begin(), entries.end(), [](const auto* a, const auto* b) {
    if (a->first.damp != b->first.damp) return a->first.damp < b->first.damp;
    return lexicographic_less(a->first.string, b->first.string);
  });
  for (const auto* entry : entries) visit(entry->first, entry->second);
}

void ObservableSum::prune_below(double threshold) {
  if (threshold <= 0.0) return;
  for (auto& order : orders_) {
    for (auto& shard : order) {
      for (auto it = shard.begin(); it != shard.end();) {
        if (std::abs(it->second) < threshold) {
          it = shard.erase(it);
        } else {
          ++it;
        }
      }
    }
  }
}

void apply_rotation(ObservableSum& sum, const PauliString& axis, double theta,
                    unsigned threads, bool allow_wide_angles) {
  if (axis.num_qubits() != sum.num_qubits()) {
    throw DimensionError("apply_rotation: axis has wrong qubit count");
  }
  if (axis.is_identity()) {
    throw SchemaError("apply_rotation: identity axis");
  }
  if (!std::isfinite(theta)) {
    throw AngleError("apply_rotation: non-finite angle");
  }
  if (!allow_wide_angles && std::abs(theta) > kQuarterPi + kAngleSlack) {
    throw AngleError(
        "apply_rotation: |theta| exceeds pi/4; run the angle transformation "
        "first (or opt into wide angles)");
  }

  const double cos_theta = std::cos(theta);
  const double sin_theta = std::sin(theta);
  const long cutoff = sum.max_order();

  struct Contribution {
    TermKey key;
    double delta;
  };
  // buffers[src][dst]: branch terms produced while scanning source shard
  // `src` that belong in destination shard `dst` one order up.  Merged in
  // fixed (src, position) order so thread count never changes results.
  std::array<std::array<std::vector<Contribution>, ObservableSum::kShards>,
             ObservableSum::kShards>
      buffers;

  for (long k = std::min(sum.highest_order_present(), cutoff); k >= 0; --k) {
    auto& current = sum.order_shards(k);
    const bool branch = k < cutoff;

    parallel_over(ObservableSum::kShards, threads, [&](std::size_t src) {
      auto& row = buffers[src];
      auto& shard = current[src];
      for (auto it = shard.begin(); it != shard.end();) {
        if (commutes(axis, it->first.string)) {
          ++it;
          continue;
        }
        const double coeff = it->second;
        if (branch) {
          auto [product, phase] = multiply(axis, it->first.string);
          if (phase.is_real()) {
            throw PhaseAlgebraError(
                "apply_rotation: real product phase for anticommuting pair");
          }
          // i * i^e is -1 for e=1 and +1 for e=3.
          const double branch_sign = phase.exponent() == 3 ? 1.0 : -1.0;
          TermKey key{std::move(product), it->first.damp};
          std::size_t dst = ObservableSum::shard_of(key);
          row[dst].push_back({std::move(key), coeff * sin_theta * branch_sign});
        }
        const double scaled = coeff * cos_theta;
        if (scaled == 0.0) {
          it = shard.erase(it);
        } else {
          it->second = scaled;
          ++it;
        }
      }
    });

    if (!branch) continue;
    auto& next = sum.order_shards(k + 1);
    std::array<std::size_t, ObservableSum::kShards> creations{};
    parallel_over(ObservableSum::kShards, threads, [&](std::size_t dst) {
      auto& shard = next[dst];
      for (std::size_t src = 0; src < ObservableSum::kShards; ++src) {
        for (const auto& contrib : buffers[src][dst]) {
          ObservableSum::accumulate(shard, contrib.key, contrib.delta,
                                    creations[dst]);
        }
      }
    });
    for (std::size_t src = 0; src < ObservableSum::kShards; ++src) {
      for (auto& bucket : buffers[src]) bucket.clear();
    }
    std::size_t created = 0;
    for (std::size_t c : creations) created += c;
    sum.note_creations(created);
  }
}

PropagationResult propagate(const InteractionPictureProgram& program,
                            const PropagateOptions& options,
                            const std::vector<NoiseSpec>& noise) {
  long order = options.order;
  if (order == kFullOrder) {
    order = static_cast<long>(program.rotations.size());
  }
  if (order < 0) {
    throw SchemaError("propagate: negative truncation order");
  }
  // Rotation order never exceeds the rotation count.
  order = std::min(order, static_cast<long>(program.rotations.size()));

  for (const auto& spec : noise) {
    spec.validate(program.n, program.rotations.size());
  }

  PropagationResult result{ObservableSum(program.n, order), {}};
  ObservableSum& sum = result.sum;
  sum.add(program.observable, 0, 0, static_cast<double>(program.sign));

  auto apply_noise_at = [&](std::size_t position) {
    for (const auto& spec : noise) {
      if (spec.after != position) continue;
      apply_channel(sum, spec, options.threads, options.damp_cutoff);
    }
  };

  auto check_cap = [&](std::size_t gate_index) {
    std::size_t count = sum.term_count();
    if (count > options.max_terms) {
      throw ResourceError("propagate: term count " + std::to_string(count) +
                              " exceeds cap " +
                              std::to_string(options.max_terms) +
                              " after rotation " + std::to_string(gate_index),
                          gate_index);
    }
  };

  apply_noise_at(0);
  result.per_gate_term_count.reserve(program.rotations.size());
  for (std::size_t i = 0; i < program.rotations.size(); ++i) {
    const auto& rot = program.rotations[i];
    apply_rotation(sum, rot.axis, rot.theta, options.threads,
                   options.allow_wide_angles);
    if (options.coeff_threshold > 0.0) {
      sum.prune_below(options.coeff_threshold);
    }
    result.per_gate_term_count.push_back(sum.term_count());
    check_cap(i);
    apply_noise_at(i + 1);
  }
  return result;
}

std::pair<double, OrderReport> expectation(const ObservableSum& sum) {
  const std::size_t levels = static_cast<std::size_t>(sum.max_order()) + 1;
  OrderReport report;
  report.per_order_value.assign(levels, 0.0);
  report.per_order_term_count = sum.per_order_term_counts();
  report.cumulative_value.assign(levels, 0.0);
  report.cumulative_term_count.assign(levels, 0);
  report.total_terms_generated = sum.total_keys_created();

  for (std::size_t k = 0; k < levels; ++k) {
    double level_value = 0.0;
    sum.for_each_sorted(static_cast<long>(k),
                        [&level_value](const TermKey& key, double coeff) {
                          if (key.string.is_diagonal()) level_value += coeff;
                        });
    report.per_order_value[k] = level_value;
  }

  double running_value = 0.0;
  std::size_t running_count = 0;
  for (std::size_t k = 0; k < levels; ++k) {
    running_value += report.per_order_value[k];
    running_count += report.per_order_term_count[k];
    report.cumulative_value[k] = running_value;
    report.cumulative_term_count[k] = running_count;
  }
  return {running_value, std::move(report)};
}

EvaluationResult evaluate(const InteractionPictureProgram& program,
                          const PropagateOptions& options,
                          const std::vector<NoiseSpec>& noise) {
  PropagationResult propagated = propagate(program, options, noise);
  auto [value, report] = expectation(propagated.sum);
  EvaluationResult out;
  out.value = value;
  out.report = std::move(report);
  return out;
}

namespace {

// Per-qubit set of Pauli factors that can occur across all reachable
// terms, as a 3-bit mask: bit 0 = X, bit 1 = Z, bit 2 = Y.
inline int local_code_bit(bool x, bool z) {
  if (x && z) return 4;
  if (x) return 1;
  if (z) return 2;
  return 0;
}

inline bool single_qubit_anticommutes(int bit_a, int bit_b) {
  // Two non-identity single-qubit Paulis anticommute iff they differ.
  return bit_a != 0 && bit_b != 0 && bit_a != bit_b;
}

inline int single_qubit_product_bit(int bit_a, int bit_b) {
  if (bit_a == 0) return bit_b;
  if (bit_b == 0) return bit_a;
  if (bit_a == bit_b) return 0;  // squares to identity
  return 7 & ~(bit_a | bit_b);   // the remaining Pauli
}

}  // namespace

InteractionPictureProgram lightcone_filter(
    const InteractionPictureProgram& program) {
  std::vector<int> possible(program.n, 0);
  for (std::size_t q = 0; q < program.n; ++q) {
    possible[q] = local_code_bit(program.observable.x_bit(q),
                                 program.observable.z_bit(q));
  }

  InteractionPictureProgram filtered;
  filtered.n = program.n;
  filtered.observable = program.observable;
  filtered.sign = program.sign;

  for (const auto& rot : program.rotations) {
    bool can_anticommute = false;
    for (std::size_t q = 0; q < program.n && !can_anticommute; ++q) {
      int axis_bit = local_code_bit(rot.axis.x_bit(q), rot.axis.z_bit(q));
      if (axis_bit == 0) continue;
      for (int b = 0; b < 3; ++b) {
        if ((possible[q] >> b) & 1) {
          if (single_qubit_anticommutes(axis_bit, 1 << b)) {
            can_anticommute = true;
            break;
          }
        }
      }
    }
    if (!can_anticommute) continue;
    filtered.rotations.push_back(rot);
    for (std::size_t q = 0; q < program.n; ++q) {
      int axis_bit = local_code_bit(rot.axis.x_bit(q), rot.axis.z_bit(q));
      if (axis_bit == 0) continue;
      int updated = possible[q] | axis_bit;  // product with an implicit I
      for (int b = 0; b < 3; ++b) {
        if ((possible[q] >> b) & 1) {
          int prod = single_qubit_product_bit(axis_bit, 1 << b);
          if (prod != 0) updated |= prod;
        }
      }
      possible[q] = updated;
    }
  }
  return filtered;
}

nlohmann::json order_report_to_json(const OrderReport& report) {
  double expval =
      report.cumulative_value.empty() ? 0.0 : report.cumulative_value.back();
  return {{"expval", expval},
          {"per_order", report.per_order_value},
          {"cumulative", report.cumulative_value},
          {"terms_per_order", report.per_order_term_count},
          {"total_terms", report.total_terms_generated}};
}

}  // namespace cliffpert
