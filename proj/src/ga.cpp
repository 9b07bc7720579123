#include "mcs/ga.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mcs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct GeneHash {
  std::size_t operator()(const std::vector<double>& v) const {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (double g : v) {
      std::uint64_t bits;
      std::memcpy(&bits, &g, sizeof(bits));
      h = splitmix64(h ^ bits);
    }
    return static_cast<std::size_t>(h);
  }
};

std::string describe(const Genome& g) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < g.genes.size(); ++i) {
    if (i) os << ",";
    if (i == 8) {
      os << "...";
      break;
    }
    os << g.genes[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

Genome Genome::zeros(int dimension) {
  Genome g;
  g.genes.assign(dimension, 0.0);
  g.bounds.assign(dimension, {0.0, 1.0});
  return g;
}

bool Genome::within_bounds() const {
  for (std::size_t i = 0; i < genes.size(); ++i)
    if (genes[i] < bounds[i].first || genes[i] > bounds[i].second) return false;
  return true;
}

std::vector<double> linear_scale(std::span<const double> fitnesses, double multiple) {
  if (fitnesses.empty()) throw std::invalid_argument("linear_scale: empty input");
  const std::size_t n = fitnesses.size();
  const double mean = std::accumulate(fitnesses.begin(), fitnesses.end(), 0.0) /
                      static_cast<double>(n);
  const double max = *std::max_element(fitnesses.begin(), fitnesses.end());
  const double min = *std::min_element(fitnesses.begin(), fitnesses.end());
  if (max == min) return {fitnesses.begin(), fitnesses.end()};

  double a = (multiple - 1.0) * mean / (max - mean);
  double b = (1.0 - a) * mean;
  if (a * min + b < 0.0) {
    // clamp the low end at zero, keep the mean
    a = mean / (mean - min);
    b = -a * min;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, a * fitnesses[i] + b);
  return out;
}

std::pair<Genome, Genome> crossover_local_arithmetic(const Genome& p1,
                                                     const Genome& p2,
                                                     std::mt19937_64& rng) {
  if (p1.genes.size() != p2.genes.size())
    throw std::invalid_argument("crossover: dimension mismatch");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Genome c1 = p1, c2 = p2;
  for (std::size_t i = 0; i < p1.genes.size(); ++i) {
    const double a = unit(rng);
    c1.genes[i] = a * p1.genes[i] + (1.0 - a) * p2.genes[i];
    c2.genes[i] = (1.0 - a) * p1.genes[i] + a * p2.genes[i];
  }
  return {std::move(c1), std::move(c2)};
}

Genome mutate_uniform(const Genome& g, double rate, std::mt19937_64& rng) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("mutation rate outside [0,1]");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Genome out = g;
  for (std::size_t i = 0; i < out.genes.size(); ++i) {
    if (unit(rng) < rate) {
      std::uniform_real_distribution<double> draw(out.bounds[i].first,
                                                  out.bounds[i].second);
      out.genes[i] = draw(rng);
    }
  }
  return out;
}

std::size_t select_parent(std::span<const double> scaled_fitnesses,
                          std::mt19937_64& rng) {
  if (scaled_fitnesses.empty()) throw std::invalid_argument("select_parent: empty input");
  const double total =
      std::accumulate(scaled_fitnesses.begin(), scaled_fitnesses.end(), 0.0);
  if (total <= 0.0) {
    std::uniform_int_distribution<std::size_t> pick(0, scaled_fitnesses.size() - 1);
    return pick(rng);
  }
  std::uniform_real_distribution<double> draw(0.0, total);
  double u = draw(rng);
  for (std::size_t i = 0; i < scaled_fitnesses.size(); ++i) {
    u -= scaled_fitnesses[i];
    if (u <= 0.0) return i;
  }
  return scaled_fitnesses.size() - 1;
}

GaResult run_ga(const FitnessFn& fitness, const GaConfig& config, int dimension) {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (config.population_size < 2)
    throw std::invalid_argument("population_size must be >= 2");
  if (config.elite_count < 0 || config.elite_count >= config.population_size)
    throw std::invalid_argument("elite_count must be in [0, population_size)");
  if (config.mutation_rate < 0.0 || config.mutation_rate > 1.0)
    throw std::invalid_argument("mutation_rate outside [0,1]");
  if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");

  std::unordered_map<std::vector<double>, double, GeneHash> cache;
  auto evaluate = [&](const Genome& g) {
    auto it = cache.find(g.genes);
    if (it != cache.end()) return it->second;
    const double f = fitness(g);
    if (!std::isfinite(f))
      throw std::runtime_error("non-finite fitness for genome " + describe(g));
    cache.emplace(g.genes, f);
    return f;
  };

  std::mt19937_64 init_rng(splitmix64(config.seed));
  std::vector<Genome> pop(config.population_size, Genome::zeros(dimension));
  {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& g : pop)
      for (int d = 0; d < dimension; ++d) {
        const auto [lo, hi] = g.bounds[d];
        g.genes[d] = lo + (hi - lo) * unit(init_rng);
      }
  }

  GaResult result;
  result.best = pop.front();
  result.best_fitness = -std::numeric_limits<double>::infinity();

  std::vector<double> fit(pop.size());
  for (int gen = 0; gen < config.iterations; ++gen) {
    double sum = 0.0;
    double gen_best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pop.size(); ++i) {
      fit[i] = evaluate(pop[i]);
      sum += fit[i];
      gen_best = std::max(gen_best, fit[i]);
      if (fit[i] > result.best_fitness) {
        result.best_fitness = fit[i];
        result.best = pop[i];
      }
    }
    result.history.push_back({gen_best, sum / static_cast<double>(pop.size())});
    if (gen + 1 == config.iterations) break;

    // roulette selection needs nonnegative weights; shift before scaling
    std::vector<double> shifted = fit;
    const double min_fit = *std::min_element(shifted.begin(), shifted.end());
    if (min_fit < 0.0)
      for (double& f : shifted) f -= min_fit;
    const std::vector<double> scaled = linear_scale(shifted, config.scaling_multiple);

    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + config.elite_count, order.end(),
                      [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });

    std::mt19937_64 rng(splitmix64(config.seed ^ (0xA5A5ULL + gen)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Genome> next;
    next.reserve(pop.size());
    for (int e = 0; e < config.elite_count; ++e) next.push_back(pop[order[e]]);
    while (next.size() < pop.size()) {
      const Genome& p1 = pop[select_parent(scaled, rng)];
      const Genome& p2 = pop[select_parent(scaled, rng)];
      Genome c1 = p1, c2 = p2;
      if (unit(rng) < config.crossover_rate)
        std::tie(c1, c2) = crossover_local_arithmetic(p1, p2, rng);
      next.push_back(mutate_uniform(c1, config.mutation_rate, rng));
      if (next.size() < pop.size())
        next.push_back(mutate_uniform(c2, config.mutation_rate, rng));
    }
    pop = std::move(next);
  }
  return result;
}

void write_ga_history_csv(const GaResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "generation,best_fitness,mean_fitness\n";
  char buf[96];
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, result.history[i].best,
                  result.history[i].mean);
    f << buf;
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace mcs
