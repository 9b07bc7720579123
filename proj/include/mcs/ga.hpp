#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mcs {

struct Genome {
  std::vector<double> genes;
  std::vector<std::pair<double, double>> bounds;  // per-gene [lower, upper]

  static Genome zeros(int dimension);  // bounds default to [0,1]
  bool within_bounds() const;
};

struct GaConfig {
  int population_size = 1000;
  int iterations = 500;
  double mutation_rate = 0.1;
  double crossover_rate = 0.8;
  int elite_count = 1;
  double scaling_multiple = 2.0;
  std::uint64_t seed = 0;
};

struct GenerationStats {
  double best = 0.0;
  double mean = 0.0;
};

struct GaResult {
  Genome best;
  double best_fitness = 0.0;
  std::vector<GenerationStats> history;  // one entry per generation
};

using FitnessFn = std::function<double(const Genome&)>;

/// Generational GA: fitness-proportional selection after linear fitness
/// scaling, per-gene arithmetic crossover, uniform random mutation,
/// elitism, fixed iteration count. Deterministic given config.seed.
GaResult run_ga(const FitnessFn& fitness, const GaConfig& config, int dimension);

/// Affine rescaling f' = a*f + b preserving the mean with max(f') =
/// multiple*mean(f); if that would drive any value negative, a,b are
/// recomputed so min(f') = 0 with the mean still preserved. All-equal
/// input is returned unchanged. Input means are assumed nonnegative
/// (run_ga shifts raw fitnesses first).
std::vector<double> linear_scale(std::span<const double> fitnesses, double multiple);

/// Per-gene convex blend: child1_i = a_i*p1_i + (1-a_i)*p2_i with
/// independently drawn a_i ~ U[0,1]; child2 takes the complement.
std::pair<Genome, Genome> crossover_local_arithmetic(const Genome& p1,
                                                     const Genome& p2,
                                                     std::mt19937_64& rng);

/// Each gene is independently redrawn uniformly from its bounds with the
/// given probability.
Genome mutate_uniform(const Genome& g, double rate, std::mt19937_64& rng);

/// Roulette-wheel draw: P(i) proportional to scaled_fitnesses[i]; uniform
/// fallback when every value is zero.
std::size_t select_parent(std::span<const double> scaled_fitnesses,
                          std::mt19937_64& rng);

/// CSV with header `generation,best_fitness,mean_fitness`.
void write_ga_history_csv(const GaResult& result, const std::string& path);

}  // namespace mcs
