#include "detuf/reservation.hpp"

namespace detuf {

ReservationTable::ReservationTable(std::size_t vertex_count)
    : size_(vertex_count), slots_(std::make_unique<std::atomic<std::uint64_t>[]>(vertex_count)) {
  for (std::size_t i = 0; i < size_; ++i) {
    slots_[i].store(std::numeric_limits<std::uint64_t>::max(), std::memory_order_relaxed);
  }
}

void ReservationTable::begin_round() {
  ++round_;
  if (round_ == std::numeric_limits<std::uint32_t>::max()) {
    // Tags would wrap; start over from a clean table.
    round_ = 1;
    for (std::size_t i = 0; i < size_; ++i) {
      slots_[i].store(std::numeric_limits<std::uint64_t>::max(), std::memory_order_relaxed);
    }
  }
}

}  // namespace detuf
