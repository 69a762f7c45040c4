#include "detuf/lowerbound.hpp"

#include <numeric>
#include <string>

#include "detuf/errors.hpp"
#include "detuf/graph.hpp"
#include "detuf/reservation.hpp"
#include "detuf/windowed.hpp"

namespace detuf {

std::size_t count_local_minima(std::span<const std::uint32_t> perm) {
  const std::size_t N = perm.size();
  if (N < 3) throw ParameterError("local minima need N >= 3");
  std::vector<char> seen(N + 1, 0);
  for (std::uint32_t x : perm) {
    if (x < 1 || x > N || seen[x]) throw ParameterError("not a permutation of 1..N");
    seen[x] = 1;
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint32_t prev = perm[(i + N - 1) % N];
    const std::uint32_t next = perm[(i + 1) % N];
    count += perm[i] < prev && perm[i] < next;
  }
  return count;
}

MinimaStats minima_experiment(std::size_t N, std::size_t trials, Rng& rng) {
  if (N < 3) throw ParameterError("minima experiment needs N >= 3");
  if (trials == 0) throw ParameterError("minima experiment needs at least one trial");
  std::vector<std::uint32_t> perm(N);
  std::iota(perm.begin(), perm.end(), std::uint32_t{1});
  const double threshold = (static_cast<double>(N) - 3.0) / 18.0;
  long double sum = 0.0L;
  std::size_t tail = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    shuffle_in_place(std::span<std::uint32_t>(perm), rng);
    const std::size_t M = count_local_minima(perm);
    sum += M;
    tail += static_cast<double>(M) <= threshold;
  }
  return {N, trials, static_cast<double>(sum / trials), static_cast<double>(tail) / trials};
}

namespace {

EdgeSequence cycle_of(std::size_t N) {
  Rng unused(0);
  return generate({GraphKind::cycle, N, 1.0}, unused);
}

void check_strategy(const LinkingStrategy& strategy, std::size_t N) {
  if (strategy.vertex_count() != N) {
    throw ParameterError("strategy covers " + std::to_string(strategy.vertex_count()) +
                         " vertices, cycle has " + std::to_string(N));
  }
}

}  // namespace

double prefix_no_collision_prob(std::size_t N, std::size_t W, std::size_t trials,
                                const LinkingStrategy& strategy, Rng& rng) {
  if (W < 2 || W > N) throw ParameterError("window must satisfy 2 <= W <= N");
  if (trials == 0) throw ParameterError("needs at least one trial");
  const EdgeSequence cycle = cycle_of(N);
  check_strategy(strategy, N);
  ReservationTable table(N);
  std::size_t clean = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    const EdgeSequence order = shuffle(cycle, rng);
    Forest f(N, strategy);
    table.begin_round();
    const auto window = make_reservations(f, order.edges, 0, W, table, 1);
    clean += first_failure(table, window, 0, W, 1).stop == W;
  }
  return static_cast<double>(clean) / static_cast<double>(trials);
}

std::vector<std::size_t> maximal_window_iterations(std::size_t N, std::size_t trials,
                                                   const LinkingStrategy& strategy, Rng& rng,
                                                   bool detach_stop_edge, int threads) {
  const EdgeSequence cycle = cycle_of(N);
  check_strategy(strategy, N);
  WindowedOptions options;
  options.detach_stop_edge = detach_stop_edge;
  std::vector<std::size_t> out;
  out.reserve(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    Rng trial = rng.split(k);
    const EdgeSequence order = shuffle(cycle, trial);
    out.push_back(
        run_windowed(order, strategy, WindowPolicy::fixed(N), threads, options).stats.iterations);
  }
  return out;
}

}  // namespace detuf
