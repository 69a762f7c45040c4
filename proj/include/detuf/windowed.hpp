#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "detuf/forest.hpp"
#include "detuf/graph.hpp"
#include "detuf/reservation.hpp"

namespace detuf {

// Windowed deterministic-reservations union-find.
//
// Each iteration looks at the next S unprocessed edges:
//   1. reserve:  every external edge priority-writes its position into the
//                slot of its smaller root (roots as of the iteration start);
//   2. stop:     the first position whose reservation lost, else the window end;
//   3. link:     every edge before `stop` is applied at once, group by group,
//                with a divide-and-conquer merge that keeps the linking
//                strategy's depth bound;
//   4. optionally the edge at `stop` is applied on its own.
// The set of merging edges equals the sequential one for any thread count.

struct WindowPolicy {
  enum class Kind { fixed, adaptive };

  Kind kind = Kind::fixed;
  std::size_t initial = 64;
  std::size_t min_size = 1;
  std::size_t max_size = std::numeric_limits<std::size_t>::max();

  static WindowPolicy fixed(std::size_t size) { return {Kind::fixed, size, size, size}; }
  /// Doubles after a failure-free window, halves when the stop falls in the
  /// first half, otherwise keeps S. S stays within [min_size, max_size].
  static WindowPolicy adaptive(std::size_t initial, std::size_t min_size, std::size_t max_size) {
    return {Kind::adaptive, initial, min_size, max_size};
  }

  void validate() const;
};

struct WorkCounters {
  std::uint64_t finds = 0;
  std::uint64_t parent_reads = 0;
  std::uint64_t link_writes = 0;  // parent writes done by links

  WorkCounters& operator+=(const WorkCounters& o) noexcept {
    finds += o.finds;
    parent_reads += o.parent_reads;
    link_writes += o.link_writes;
    return *this;
  }
};

struct RunStats {
  std::size_t iterations = 0;
  std::vector<std::size_t> executed_per_iteration;
  std::vector<std::size_t> failed_per_iteration;
  std::vector<std::size_t> window_per_iteration;
  std::size_t failed_reservation_events = 0;
  std::vector<std::size_t> success_set;
  WorkCounters work;
  std::optional<double> wall_seconds;
};

inline constexpr VertexId kNoRoot = std::numeric_limits<VertexId>::max();

/// Outcome of the reservation phase for one window position.
struct Reservation {
  VertexId loser = kNoRoot;   // the reserved (smaller) root
  VertexId winner = kNoRoot;

  bool external() const noexcept { return loser != kNoRoot; }
};

/// Roots of `vertices`, then relinks every traversed vertex straight to its
/// root. Same result as per-vertex find_root with full compaction; the
/// shadow forest is untouched. With Compaction::none nothing is written.
std::vector<VertexId> bulk_find_roots(Forest& f, std::span<const VertexId> vertices, int threads,
                                      WorkCounters* work = nullptr);

/// Reservation phase for positions [l, r). `table` must be in a fresh round.
/// Returns one entry per position, indexed from l.
std::vector<Reservation> make_reservations(Forest& f, std::span<const Edge> edges, std::size_t l,
                                           std::size_t r, ReservationTable& table, int threads,
                                           WorkCounters* work = nullptr);

struct FailureScan {
  std::size_t stop = 0;    // first failed position, or r
  std::size_t failed = 0;  // failed reservations anywhere in [l, r)
};

FailureScan first_failure(const ReservationTable& table, std::span<const Reservation> window,
                          std::size_t l, std::size_t r, int threads);

/// Applies every external position in [l, stop). `window` is indexed from l.
/// Throws ContractError if two of those edges reserved the same root.
/// Returns the applied (merging) positions in increasing order.
std::vector<std::size_t> parallel_link_all(Forest& f, std::span<const Reservation> window,
                                           std::size_t l, std::size_t stop, int threads,
                                           WorkCounters* work = nullptr);

/// Convenience form that derives the reservations from the current forest.
std::vector<std::size_t> parallel_link_all(Forest& f, std::span<const Edge> edges, std::size_t l,
                                           std::size_t stop, int threads);

struct IterationView {
  std::size_t iteration = 0;
  std::size_t begin = 0;       // i
  std::size_t stop = 0;        // first failure or window end
  std::size_t window_end = 0;  // min(i + S, |E|)
  std::size_t window_size = 0; // S
  std::size_t failed = 0;
};

struct WindowedOptions {
  bool detach_stop_edge = true;
  Compaction compaction = Compaction::full;
  /// After the stop point is known, before anything is linked.
  std::function<void(const Forest&, const IterationView&)> on_prefix;
  /// After all of the iteration's edges were applied.
  std::function<void(const Forest&, const IterationView&)> on_iteration;
};

struct WindowedRun {
  RunStats stats;
  Forest forest;
};

/// Runs the windowed algorithm over `seq` in the given order.
WindowedRun run_windowed(const EdgeSequence& seq, const LinkingStrategy& strategy,
                         const WindowPolicy& policy, int threads,
                         const WindowedOptions& options = {});

struct DeterminismReport {
  bool identical = false;
  std::vector<std::size_t> sequential;
  std::vector<std::size_t> parallel;
  std::optional<std::size_t> first_difference;  // index into the success lists
};

DeterminismReport compare_with_sequential(const EdgeSequence& seq, const LinkingStrategy& strategy,
                                          const WindowPolicy& policy, int threads,
                                          const WindowedOptions& options = {});

bool verify_internal_determinism(const EdgeSequence& seq, const LinkingStrategy& strategy,
                                 const WindowPolicy& policy, int threads,
                                 const WindowedOptions& options = {});

inline constexpr const char* kRunCsvHeader = "iteration,prefix_len,failed,window_size";

/// Rows `iteration,prefix_len,failed,window_size` (no header).
void write_run_rows(const RunStats& stats, std::ostream& out);

}  // namespace detuf
