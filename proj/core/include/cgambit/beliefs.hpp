#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgambit/model.hpp"
#include "cgambit/rng.hpp"

namespace cgambit {

/// Dirichlet parameters of one CPT row. The prior is immutable after
/// init; observations are kept as integer counts so that the effective
/// alpha is always exactly prior + count, independent of update order.
struct DirichletRow {
  std::vector<double> prior;
  std::vector<std::uint64_t> counts;

  double alpha(std::size_t state) const {
    return prior[state] + static_cast<double>(counts[state]);
  }
  std::vector<double> alpha_vector() const;
  double alpha_sum() const;
  std::uint64_t observations() const;
  std::vector<double> mean() const;  // alpha / sum(alpha)

  bool operator==(const DirichletRow&) const = default;
};

enum class BeliefInitStrategy { Uniform, Random };

struct BeliefInit {
  BeliefInitStrategy strategy = BeliefInitStrategy::Random;
  double lo = 0.5;
  double hi = 2.0;

  static BeliefInit uniform() { return {BeliefInitStrategy::Uniform, 1.0, 1.0}; }
  static BeliefInit random(double lo, double hi) { return {BeliefInitStrategy::Random, lo, hi}; }
};

enum class RealizationMode { Mean, Sample };

/// Per-row Dirichlet beliefs over every CPT of a known structure.
/// Excluded variables (the intervened action variable) are never updated
/// and realize to uniform rows; interventional queries never consult
/// them.
struct BeliefStore {
  ModelStructure structure;
  std::vector<std::vector<DirichletRow>> rows;  // [variable][row]
  std::vector<bool> excluded;

  const DirichletRow& row(int variable, std::size_t row_index) const;
  DirichletRow& row(int variable, std::size_t row_index);

  bool operator==(const BeliefStore&) const = default;
};

/// Uniform: every prior entry is 1. Random: every prior entry drawn
/// independently uniform in [lo, hi], iterating variables, rows, then
/// states in order, so a fixed seed reproduces the store.
BeliefStore init_beliefs(const ModelStructure& structure, const BeliefInit& init, RngStream& rng,
                         const std::vector<int>& excluded_variables = {});

/// Conjugate update: for each non-excluded variable, the row matching
/// the observed parent configuration gains one count at the observed
/// state.
void update(BeliefStore& beliefs, const Outcome& outcome);

/// Assembles a concrete model from the beliefs: row-wise posterior means
/// or independent Dirichlet draws. Excluded variables get uniform rows.
CausalModel realize_model(const BeliefStore& beliefs, RealizationMode mode, RngStream& rng);

std::vector<double> posterior_mean(const BeliefStore& beliefs, int variable,
                                   std::size_t row_index);
std::vector<double> posterior_mean(const BeliefStore& beliefs, int variable,
                                   std::span<const int> parent_config);

struct TvRow {
  int variable = -1;
  std::size_t row = 0;
  std::uint64_t observations = 0;
  double tv = 0.0;
};

/// Total-variation distance of posterior means against a ground-truth
/// model, per row and averaged, over non-excluded rows with at least
/// min_count observations.
struct TvReport {
  std::vector<TvRow> rows;
  double mean = 0.0;
};

TvReport tv_distance(const BeliefStore& beliefs, const CausalModel& truth,
                     std::uint64_t min_count);

/// JSON snapshot mirroring the model-file shape, with alpha vectors in
/// place of probability rows.
std::string serialize_beliefs(const BeliefStore& beliefs);

}  // namespace cgambit
