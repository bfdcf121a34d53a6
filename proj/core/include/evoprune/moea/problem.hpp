#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "evoprune/moea/genome.hpp"
#include "evoprune/objectives.hpp"

namespace evoprune::moea {

/// Bi-objective minimization problem. evaluate() must be deterministic and
/// safe to call concurrently.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual GenomeKind kind() const = 0;
  virtual std::size_t genome_length() const = 0;

  /// Per-gene bounds; only meaningful for continuous problems.
  virtual std::shared_ptr<const BoundsList> bounds() const { return nullptr; }

  virtual ObjectiveVector evaluate(const Genome& genome) const = 0;

  /// Optional population seeding hook. Returning nullopt selects the engine
  /// default (LHS for continuous, fair coin bits for binary).
  virtual std::optional<std::vector<Genome>> initial_population(std::size_t /*count*/,
                                                                std::uint64_t /*seed*/) const {
    return std::nullopt;
  }

  /// Divisors that bring both objectives to a comparable scale; used by the
  /// decomposition engine for its scalarizing function.
  virtual ObjectiveVector objective_scale() const { return {1.0, 1.0}; }

  /// Per-bit importance in [0,1] for importance-weighted bit-flip mutation.
  virtual const std::vector<double>* bit_importance() const { return nullptr; }
};

/// Continuous problem backed by a callable; handy for tests and benchmarks.
class FunctionProblem : public Problem {
 public:
  using Fn = std::function<ObjectiveVector(const std::vector<double>&)>;

  FunctionProblem(BoundsList bounds, Fn fn)
      : bounds_(std::make_shared<const BoundsList>(std::move(bounds))), fn_(std::move(fn)) {}

  GenomeKind kind() const override { return GenomeKind::Continuous; }
  std::size_t genome_length() const override { return bounds_->size(); }
  std::shared_ptr<const BoundsList> bounds() const override { return bounds_; }
  ObjectiveVector evaluate(const Genome& genome) const override {
    return fn_(std::get<Continuous>(genome).values);
  }

 private:
  std::shared_ptr<const BoundsList> bounds_;
  Fn fn_;
};

}  // namespace evoprune::moea
