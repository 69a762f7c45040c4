#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "detuf/collision.hpp"
#include "detuf/errors.hpp"
#include "detuf/kruskal.hpp"
#include "detuf/reservation.hpp"
#include "detuf/windowed.hpp"
#include "oracles.hpp"

using namespace detuf;

namespace {

EdgeSequence seq_of(std::size_t n, std::vector<Edge> edges) {
  EdgeSequence s;
  s.vertex_count = n;
  s.edges = std::move(edges);
  return s;
}

EdgeSequence star5() {
  Rng r(1);
  return generate({GraphKind::star, 5, 0}, r);
}

WindowedOptions no_detach() {
  WindowedOptions o;
  o.detach_stop_edge = false;
  return o;
}

std::vector<VertexId> copy(std::span<const VertexId> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_SUITE("write_min") {
  TEST_CASE("lowers only") {
    std::atomic<std::uint64_t> slot{std::numeric_limits<std::uint64_t>::max()};
    CHECK(write_min(slot, std::uint64_t{5}));
    CHECK(slot.load() == 5);
    CHECK_FALSE(write_min(slot, std::uint64_t{7}));
    CHECK(slot.load() == 5);
  }

  TEST_CASE("concurrent writers leave the global minimum") {
    for (int round = 0; round < 50; ++round) {
      std::atomic<std::uint64_t> slot{std::numeric_limits<std::uint64_t>::max()};
      const int writers = 8;
      std::vector<std::thread> pool;
      for (int w = 0; w < writers; ++w) {
        pool.emplace_back([&, w] {
          for (std::uint64_t k = 0; k < 2000; ++k) write_min(slot, 1000 + (k * 7919 + w * 104729) % 100000);
        });
      }
      for (auto& t : pool) t.join();
      std::uint64_t expected = std::numeric_limits<std::uint64_t>::max();
      for (int w = 0; w < writers; ++w) {
        for (std::uint64_t k = 0; k < 2000; ++k) {
          expected = std::min<std::uint64_t>(expected, 1000 + (k * 7919 + w * 104729) % 100000);
        }
      }
      REQUIRE(slot.load() == expected);
    }
  }
}

TEST_SUITE("reservation table") {
  TEST_CASE("empty slots hold nothing, rounds isolate") {
    ReservationTable t(4);
    t.begin_round();
    CHECK_FALSE(t.holder(0).has_value());
    t.reserve(2, 9);
    t.reserve(2, 3);
    t.reserve(2, 5);
    CHECK(t.holder(2) == ReservationTable::Position{3});
    t.begin_round();
    CHECK_FALSE(t.holder(2).has_value());
    t.reserve(2, 11);
    CHECK(t.holder(2) == ReservationTable::Position{11});
  }
}

TEST_SUITE("reservation phase") {
  TEST_CASE("fresh star window") {
    const auto s = star5();
    Forest f(5, LinkingStrategy::by_vertex_id(LinkKind::by_size, 5));
    ReservationTable table(5);
    table.begin_round();
    const auto res = make_reservations(f, s.edges, 0, 4, table, 2);
    for (const auto& r : res) CHECK(r.loser == 0);
    CHECK(table.holder(0) == ReservationTable::Position{0});
    for (VertexId v = 1; v < 5; ++v) CHECK_FALSE(table.holder(v).has_value());
    const auto scan = first_failure(table, res, 0, 4, 2);
    CHECK(scan.stop == 1);
    CHECK(scan.failed == 3);
  }

  TEST_CASE("single external edge") {
    const auto s = seq_of(4, {{2, 3}});
    Forest f(4, LinkingStrategy::by_vertex_id(LinkKind::by_size, 4));
    ReservationTable table(4);
    table.begin_round();
    const auto res = make_reservations(f, s.edges, 0, 1, table, 1);
    CHECK(table.holder(2) == ReservationTable::Position{0});
    for (VertexId v : {0u, 1u, 3u}) CHECK_FALSE(table.holder(v).has_value());
    CHECK(first_failure(table, res, 0, 1, 1).stop == 1);
  }

  TEST_CASE("distinct roots keep their own positions") {
    const auto s = seq_of(4, {{0, 1}, {2, 3}});
    Forest f(4, LinkingStrategy::by_vertex_id(LinkKind::by_size, 4));
    ReservationTable table(4);
    table.begin_round();
    const auto res = make_reservations(f, s.edges, 0, 2, table, 1);
    CHECK(table.holder(0) == ReservationTable::Position{0});
    CHECK(table.holder(2) == ReservationTable::Position{1});
    const auto scan = first_failure(table, res, 0, 2, 1);
    CHECK(scan.stop == 2);
    CHECK(scan.failed == 0);
  }

  TEST_CASE("same-component positions never fail") {
    const auto s = seq_of(3, {{0, 1}, {0, 1}, {1, 0}});
    Forest f(3, LinkingStrategy::by_vertex_id(LinkKind::by_size, 3));
    f.unite(0, 1);
    ReservationTable table(3);
    table.begin_round();
    const auto res = make_reservations(f, s.edges, 0, 3, table, 1);
    for (const auto& r : res) CHECK_FALSE(r.external());
    CHECK(first_failure(table, res, 0, 3, 1).stop == 3);
  }

  TEST_CASE("stop is the first failed position for any thread count") {
    Rng rng(41);
    for (int k = 0; k < 40; ++k) {
      const auto seq = oracle::random_graph(rng, 50);
      if (seq.size() < 2) continue;
      const auto st = LinkingStrategy::random(LinkKind::by_size, seq.vertex_count, rng);
      std::size_t expected = seq.size();
      {
        Forest f(seq.vertex_count, st);
        for (std::size_t a = 0; a < seq.size() && expected == seq.size(); ++a) {
          for (std::size_t b = 0; b < a; ++b) {
            if (collides(f, seq.edges[a], seq.edges[b])) {
              expected = a;
              break;
            }
          }
        }
      }
      for (int threads : {1, 2, 4, 8}) {
        Forest f(seq.vertex_count, st);
        ReservationTable table(seq.vertex_count);
        table.begin_round();
        const auto res = make_reservations(f, seq.edges, 0, seq.size(), table, threads);
        CHECK(first_failure(table, res, 0, seq.size(), threads).stop == expected);
      }
    }
  }
}

TEST_SUITE("bulk_find_roots") {
  TEST_CASE("roots map to themselves") {
    Forest f(6, LinkingStrategy::by_vertex_id(LinkKind::by_size, 6));
    const std::vector<VertexId> all{0, 1, 2, 3, 4, 5};
    CHECK(bulk_find_roots(f, all, 4) == all);
  }

  TEST_CASE("equals per-vertex find_root on 100 random forests") {
    Rng rng(61);
    for (int k = 0; k < 100; ++k) {
      const auto seq = oracle::random_graph(rng, 60);
      const auto st = LinkingStrategy::random(static_cast<LinkKind>(k % 3), seq.vertex_count, rng);
      const Compaction comp = k % 2 ? Compaction::full : Compaction::none;
      Forest f(seq.vertex_count, st, comp);
      for (const Edge& e : seq.edges) f.unite(e.u, e.v);
      Forest g = f;
      std::vector<VertexId> queries;
      for (int q = 0; q < 40; ++q) queries.push_back(static_cast<VertexId>(rng.uniform_below(seq.vertex_count)));
      std::vector<std::vector<VertexId>> paths;
      for (VertexId q : queries) {
        std::vector<VertexId> path{q};
        while (f.parent(path.back()) != path.back()) path.push_back(f.parent(path.back()));
        paths.push_back(path);
      }
      std::vector<VertexId> want;
      for (VertexId q : queries) want.push_back(f.root_of(q));
      const auto got = bulk_find_roots(g, queries, 1 + k % 8);
      REQUIRE(got == want);
      CHECK(copy(g.shadow_parents()) == copy(f.shadow_parents()));
      if (comp == Compaction::none) {
        CHECK(copy(g.parents()) == copy(f.parents()));
        continue;
      }
      for (std::size_t i = 0; i < queries.size(); ++i) {
        for (VertexId v : paths[i]) CHECK(g.parent(v) == want[i]);
      }
    }
  }

  TEST_CASE("out-of-range vertex is rejected") {
    Forest f(3, LinkingStrategy::by_vertex_id(LinkKind::by_size, 3));
    const std::vector<VertexId> bad{0, 3};
    CHECK_THROWS_AS(bulk_find_roots(f, bad, 1), ParameterError);
  }
}

TEST_SUITE("parallel_link_all") {
  TEST_CASE("chain of four singletons becomes one shallow tree") {
    const auto s = seq_of(4, {{0, 1}, {1, 2}, {2, 3}});
    for (auto kind : {LinkKind::by_size, LinkKind::by_rank, LinkKind::by_random_priority}) {
      Forest f(4, LinkingStrategy::by_vertex_id(kind, 4));
      const auto applied = parallel_link_all(f, s.edges, 0, 3, 2);
      CHECK(applied == std::vector<std::size_t>{0, 1, 2});
      CHECK(f.component_count() == 1);
      if (kind != LinkKind::by_random_priority) CHECK(f.max_uncompressed_depth() <= 2);
    }
  }

  TEST_CASE("stop = l is a no-op") {
    const auto s = seq_of(4, {{0, 1}, {1, 2}});
    Forest f(4, LinkingStrategy::by_vertex_id(LinkKind::by_size, 4));
    CHECK(parallel_link_all(f, s.edges, 1, 1, 4).empty());
    CHECK(f.component_count() == 4);
  }

  TEST_CASE("colliding prefix is a contract error") {
    const auto s = seq_of(3, {{0, 1}, {0, 2}});
    Forest f(3, LinkingStrategy::by_vertex_id(LinkKind::by_size, 3));
    CHECK_THROWS_AS(parallel_link_all(f, s.edges, 0, 2, 1), ContractError);
    CHECK(f.component_count() == 3);
  }

  TEST_CASE("partition equals BFS after a conflict-free prefix") {
    Rng rng(71);
    for (int k = 0; k < 60; ++k) {
      const auto seq = oracle::random_graph(rng, 50);
      const auto st = LinkingStrategy::random(static_cast<LinkKind>(k % 3), seq.vertex_count, rng);
      Forest f(seq.vertex_count, st);
      ReservationTable table(seq.vertex_count);
      table.begin_round();
      const auto res = make_reservations(f, seq.edges, 0, seq.size(), table, 2);
      const std::size_t stop = first_failure(table, res, 0, seq.size(), 2).stop;
      parallel_link_all(f, res, 0, stop, 3);
      const auto labels = oracle::bfs_labels(seq.vertex_count, seq.edges, stop);
      for (VertexId u = 0; u < seq.vertex_count; ++u) REQUIRE(f.root_of(u) == f.root_of(labels[u]));
      REQUIRE(f.component_count() == oracle::component_count(labels));
      if (st.kind() == LinkKind::by_size) {
        REQUIRE(f.max_uncompressed_depth() <= std::log2(static_cast<double>(seq.vertex_count)));
      }
    }
  }
}

TEST_SUITE("run_windowed") {
  TEST_CASE("star of 5, S = 4, stop edge not detached") {
    const auto st = LinkingStrategy::by_vertex_id(LinkKind::by_size, 5);
    const auto run = run_windowed(star5(), st, WindowPolicy::fixed(4), 2, no_detach());
    CHECK(run.stats.iterations == 2);
    CHECK(run.stats.executed_per_iteration == std::vector<std::size_t>{1, 3});
    CHECK(run.stats.success_set == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(run.stats.failed_reservation_events == 3);
  }

  TEST_CASE("star of 5 with the stop edge detached") {
    const auto st = LinkingStrategy::by_vertex_id(LinkKind::by_size, 5);
    const auto run = run_windowed(star5(), st, WindowPolicy::fixed(4), 1);
    CHECK(run.stats.executed_per_iteration == std::vector<std::size_t>{2, 2});
    CHECK(run.stats.success_set == std::vector<std::size_t>{0, 1, 2, 3});
  }

  TEST_CASE("triangle, any S") {
    const auto s = seq_of(3, {{0, 1}, {1, 2}, {0, 2}});
    const auto st = LinkingStrategy::by_vertex_id(LinkKind::by_size, 3);
    for (std::size_t S = 1; S <= 4; ++S) {
      for (bool detach : {false, true}) {
        WindowedOptions o;
        o.detach_stop_edge = detach;
        CHECK(run_windowed(s, st, WindowPolicy::fixed(S), 2, o).stats.success_set ==
              std::vector<std::size_t>{0, 1});
      }
    }
  }

  TEST_CASE("a cycle-closing edge in the window is excluded") {
    // (0,2) closes a cycle only once the earlier edges are applied.
    const auto s = seq_of(4, {{0, 1}, {2, 3}, {1, 3}, {0, 2}});
    const auto st = LinkingStrategy::by_vertex_id(LinkKind::by_size, 4);
    const auto seq_run = run_sequential(s, st);
    CHECK(seq_run.success_set == std::vector<std::size_t>{0, 1, 2});
    for (std::size_t S : {1u, 2u, 3u, 4u}) {
      CHECK(run_windowed(s, st, WindowPolicy::fixed(S), 2).stats.success_set == seq_run.success_set);
    }
  }

  TEST_CASE("conservation and the success set size") {
    Rng rng(81);
    for (int k = 0; k < 60; ++k) {
      const auto seq = oracle::random_graph(rng, 60);
      const auto st = LinkingStrategy::random(static_cast<LinkKind>(k % 3), seq.vertex_count, rng);
      const std::size_t S = 1 + rng.uniform_below(64);
      WindowedOptions o;
      o.detach_stop_edge = k % 2 == 0;
      const auto run = run_windowed(seq, st, WindowPolicy::fixed(S), 1 + k % 4, o);
      std::size_t total = 0;
      for (auto x : run.stats.executed_per_iteration) total += x;
      CHECK(total == seq.size());
      CHECK(run.stats.iterations == run.stats.executed_per_iteration.size());
      const auto labels = oracle::bfs_labels(seq.vertex_count, seq.edges, seq.size());
      CHECK(run.stats.success_set.size() == seq.vertex_count - oracle::component_count(labels));
      CHECK(run.stats.work.link_writes == run.stats.success_set.size());
    }
  }

  TEST_CASE("observers see every iteration; prefixes are collision-free") {
    Rng rng(91);
    for (int k = 0; k < 40; ++k) {
      const auto seq = oracle::random_graph(rng, 40);
      const auto st = LinkingStrategy::random(static_cast<LinkKind>(k % 3), seq.vertex_count, rng);
      std::size_t prefixes = 0, ends = 0;
      WindowedOptions o;
      o.on_prefix = [&](const Forest& f, const IterationView& v) {
        ++prefixes;
        for (std::size_t a = v.begin; a < v.stop; ++a) {
          for (std::size_t b = a + 1; b < v.stop; ++b) REQUIRE_FALSE(collides(f, seq.edges[a], seq.edges[b]));
        }
      };
      o.on_iteration = [&](const Forest& f, const IterationView& v) {
        ++ends;
        const std::size_t done = v.stop + (v.stop < v.window_end ? 1 : 0);
        const auto labels = oracle::bfs_labels(seq.vertex_count, seq.edges, done);
        for (VertexId u = 0; u < seq.vertex_count; ++u) REQUIRE(f.root_of(u) == f.root_of(labels[u]));
      };
      const auto run = run_windowed(seq, st, WindowPolicy::fixed(1 + k % 16), 2, o);
      CHECK(prefixes == run.stats.iterations);
      CHECK(ends == run.stats.iterations);
    }
  }

  TEST_CASE("adaptive window doubles, halves, and stays clamped") {
    Rng rng(5);
    const auto seq = shuffle(generate({GraphKind::erdos_renyi, 400, 0.02}, rng), rng);
    const auto st = LinkingStrategy::random(LinkKind::by_size, 400, rng);
    const auto policy = WindowPolicy::adaptive(8, 2, 64);
    const auto run = run_windowed(seq, st, policy, 2, no_detach());
    const auto& w = run.stats.window_per_iteration;
    REQUIRE(w.size() == run.stats.iterations);
    CHECK(w.front() == 8);
    bool grew = false, shrank = false;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      CHECK(w[k] >= 2);
      CHECK(w[k] <= 64);
      const std::size_t executed = run.stats.executed_per_iteration[k];
      if (run.stats.failed_per_iteration[k] == 0) {
        CHECK(w[k + 1] == std::min<std::size_t>(2 * w[k], 64));
      } else if (executed < w[k] / 2) {
        CHECK(w[k + 1] == std::max<std::size_t>(w[k] / 2, 2));
      } else {
        CHECK(w[k + 1] == w[k]);
      }
      grew = grew || w[k + 1] > w[k];
      shrank = shrank || w[k + 1] < w[k];
    }
    CHECK(grew);
    CHECK(shrank);
    CHECK(verify_internal_determinism(seq, st, policy, 4));
  }

  TEST_CASE("invalid arguments") {
    const auto st = LinkingStrategy::by_vertex_id(LinkKind::by_size, 5);
    CHECK_THROWS_AS(run_windowed(star5(), st, WindowPolicy::fixed(4), 0), ParameterError);
    CHECK_THROWS_AS(run_windowed(star5(), st, WindowPolicy::fixed(0), 1), ParameterError);
    CHECK_THROWS_AS(run_windowed(star5(), st, WindowPolicy::adaptive(1, 2, 8), 1), ParameterError);
    CHECK_THROWS_AS(run_windowed(star5(), st, WindowPolicy::adaptive(4, 8, 2), 1), ParameterError);
  }

  TEST_CASE("identical results across thread counts") {
    Rng rng(101);
    for (int k = 0; k < 30; ++k) {
      const auto seq = oracle::random_graph(rng, 64);
      const auto st = LinkingStrategy::random(static_cast<LinkKind>(k % 3), seq.vertex_count, rng);
      const auto policy = WindowPolicy::fixed(1 + rng.uniform_below(64));
      const auto base = run_windowed(seq, st, policy, 1);
      for (int threads : {2, 4, 8}) {
        const auto run = run_windowed(seq, st, policy, threads);
        REQUIRE(run.stats.success_set == base.stats.success_set);
        REQUIRE(run.stats.executed_per_iteration == base.stats.executed_per_iteration);
        REQUIRE(copy(run.forest.shadow_parents()) == copy(base.forest.shadow_parents()));
        REQUIRE(copy(run.forest.parents()) == copy(base.forest.parents()));
        REQUIRE(run.stats.work.finds == base.stats.work.finds);
        REQUIRE(run.stats.work.parent_reads == base.stats.work.parent_reads);
      }
      const auto report = compare_with_sequential(seq, st, policy, 4);
      CHECK(report.identical);
      CHECK_FALSE(report.first_difference.has_value());
    }
  }

  TEST_CASE("run CSV rows") {
    const auto st = LinkingStrategy::by_vertex_id(LinkKind::by_size, 5);
    const auto run = run_windowed(star5(), st, WindowPolicy::fixed(4), 1, no_detach());
    std::ostringstream out;
    write_run_rows(run.stats, out);
    CHECK(out.str() == "0,1,3,4\n1,3,0,4\n");
    CHECK(std::string(kRunCsvHeader) == "iteration,prefix_len,failed,window_size");
  }
}

TEST_SUITE("kruskal") {
  TEST_CASE("weighted triangle") {
    const auto s = seq_of(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}});
    const auto st = LinkingStrategy::by_vertex_id(LinkKind::by_size, 3);
    const auto mst = parallel_kruskal(s, st, WindowPolicy::fixed(3), 2);
    CHECK(mst.mst_edges == std::vector<std::size_t>{0, 1});
    CHECK(mst.total_weight == 3.0);
  }

  TEST_CASE("matches the brute-force oracle and is thread-invariant") {
    Rng rng(111);
    for (int k = 0; k < 40; ++k) {
      const auto seq = assign_random_weights(oracle::random_graph(rng, 60), rng);
      const auto st = LinkingStrategy::random(LinkKind::by_size, seq.vertex_count, rng);
      const auto want = oracle::brute_kruskal(seq);
      double weight = -1.0;
      for (int threads : {1, 2, 8}) {
        const auto mst = parallel_kruskal(seq, st, WindowPolicy::fixed(1 + k), threads);
        CHECK(mst.mst_edges == want.positions);
        CHECK(mst.total_weight == doctest::Approx(want.weight).epsilon(1e-12));
        if (weight >= 0.0) CHECK(mst.total_weight == weight);
        weight = mst.total_weight;
      }
      CHECK(sequential_kruskal(seq, st).mst_edges == want.positions);
    }
  }

  TEST_CASE("missing or duplicate weights are rejected") {
    const auto st = LinkingStrategy::by_vertex_id(LinkKind::by_size, 3);
    CHECK_THROWS_AS(parallel_kruskal(seq_of(3, {{0, 1, 1.0}, {1, 2}}), st, WindowPolicy::fixed(2), 1),
                    ParameterError);
    CHECK_THROWS_AS(parallel_kruskal(seq_of(3, {{0, 1, 1.0}, {1, 2, 1.0}}), st, WindowPolicy::fixed(2), 1),
                    ParameterError);
  }
}

TEST_SUITE("toy window bound") {
  TEST_CASE("all-windows collision count covers the failed reservations") {
    Rng rng(121);
    for (int k = 0; k < 300; ++k) {
      const auto seq = oracle::random_graph(rng, 40);
      const auto st = LinkingStrategy::random(static_cast<LinkKind>(k % 3), seq.vertex_count, rng);
      const std::size_t S = 2 + rng.uniform_below(20);
      WindowedOptions o;
      o.detach_stop_edge = k % 2 == 0;
      const auto run = run_windowed(seq, st, WindowPolicy::fixed(S), 1, o);
      REQUIRE(toy_window_collisions(seq, S, st) >= run.stats.failed_reservation_events);
    }
  }
}
