#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>

#include "detuf/graph.hpp"

namespace detuf {

/// Priority write: slot = min(slot, value), atomically. Returns true if this
/// call lowered the slot. The final value is the minimum of every value ever
/// written, whatever the interleaving.
template <class T>
bool write_min(std::atomic<T>& slot, T value) noexcept {
  T current = slot.load(std::memory_order_relaxed);
  while (value < current) {
    if (slot.compare_exchange_weak(current, value, std::memory_order_relaxed)) return true;
  }
  return false;
}

/// Per-vertex fetch-min slots holding window positions.
///
/// Slots are versioned by round instead of cleared: a slot stores
/// (~round << 32 | position), so any write from the current round is smaller
/// than every stale value and `begin_round` is O(1).
class ReservationTable {
 public:
  using Position = std::uint32_t;

  explicit ReservationTable(std::size_t vertex_count);

  std::size_t size() const noexcept { return size_; }

  void begin_round();
  std::uint32_t round() const noexcept { return round_; }

  void reserve(VertexId root, Position position) noexcept {
    write_min(slots_[root], encode(position));
  }

  /// Winning position this round, or nullopt (the slot is "infinity").
  std::optional<Position> holder(VertexId root) const noexcept {
    const std::uint64_t v = slots_[root].load(std::memory_order_relaxed);
    if ((v >> 32) != tag()) return std::nullopt;
    return static_cast<Position>(v & 0xffffffffu);
  }

 private:
  std::uint64_t tag() const noexcept { return std::numeric_limits<std::uint32_t>::max() - round_; }
  std::uint64_t encode(Position p) const noexcept { return (tag() << 32) | p; }

  std::size_t size_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> slots_;
  std::uint32_t round_ = 1;
};

}  // namespace detuf
