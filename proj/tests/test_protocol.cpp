#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "rushsim/analysis.hpp"
#include "rushsim/protocol.hpp"
#include "support.hpp"

using namespace rushsim;
using namespace rushsim::testing;

namespace {

// Hand-driven network on a fixed topology; no events run unless asked.
struct Bench {
  World world;
  NetScheduler sched;
  RunTrace trace;
  MulticastNetwork net;

  Bench(std::vector<Position> pos, Membership m, ProtocolParams p = {})
      : world(area_for(pos), RadioParams{}, pos, 0.0, 1),
        net(world, sched, std::move(m), p, 1, trace) {}

  static Area area_for(const std::vector<Position>& pos) {
    Area a{1.0, 1.0};
    for (const auto& q : pos) {
      a.width = std::max(a.width, q.x);
      a.height = std::max(a.height, q.y);
    }
    return a;
  }

  std::size_t sent(NodeId node, PacketKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(trace.transmissions.begin(), trace.transmissions.end(),
                      [&](const auto& t) { return t.node == node && t.kind == kind; }));
  }
};

Membership diamond_members() { return {kDiamondS, {kDiamondR}}; }

// Static connected 20-node topology in the default area, searched by seed.
std::vector<Position> connected_topology(std::uint64_t& seed) {
  for (;; ++seed) {
    auto pos = init_world({500.0, 500.0}, 20, seed);
    if (unit_disk_graph(pos, 250.0).connected()) {
      return pos;
    }
  }
}

}  // namespace

TEST_CASE("originate_query") {
  SUBCASE("round 0 at t=0, next round at 3.0") {
    Bench b(line(3), {0, {2}});
    b.net.start(20.0);
    b.sched.run_until(0.0, [&](const NetEvent& ev) { b.net.handle(ev); });
    REQUIRE(b.trace.rounds.size() == 1);
    CHECK(b.trace.transmissions.front().at == 0.0);
    CHECK(b.trace.transmissions.front().fanout == 1);
    b.sched.run_until(3.0, [&](const NetEvent& ev) { b.net.handle(ev); });
    REQUIRE(b.trace.rounds.size() == 2);
    CHECK(b.trace.rounds[1].round == 1);
    CHECK(b.trace.rounds[1].origin == 3.0);
  }
  SUBCASE("sender with no neighbors still schedules rounds") {
    Bench b({{0.0, 0.0}, {400.0, 0.0}}, {0, {1}});
    b.net.start(10.0);
    b.sched.run_until(10.0, [&](const NetEvent& ev) { b.net.handle(ev); });
    CHECK(b.trace.rounds.size() == 4);
    for (const auto& t : b.trace.transmissions) {
      CHECK(t.fanout == 0);
    }
  }
  SUBCASE("1000 s horizon with 3 s refresh gives 334 rounds") {
    ProtocolParams p;
    p.data_start = 0.0;
    Bench b({{0.0, 0.0}, {400.0, 0.0}}, {0, {1}}, p);
    b.net.start(1000.0);
    b.sched.run_until(1000.0, [&](const NetEvent& ev) { b.net.handle(ev); });
    CHECK(b.trace.rounds.size() == 334);
    CHECK(b.trace.data.size() == 4000);
  }
  SUBCASE("only the source may originate") {
    Bench b(line(3), {0, {2}});
    CHECK_THROWS(b.net.originate_query(1, 0, 0.0));
    CHECK_THROWS(b.net.originate_data(1, 0, 0.0));
  }
}

TEST_CASE("handle_query") {
  Bench b(diamond(), diamond_members());
  const auto k7 = round_key(kDiamondS, 7);

  SUBCASE("first copy sets upstream and rebroadcasts") {
    b.net.handle_query(kDiamondM, JoinQuery{kDiamondS, 7, kDiamondA, {kDiamondS, kDiamondA}}, 1.0);
    CHECK(b.net.state(kDiamondM).upstream.at(k7) == kDiamondA);
    CHECK(b.sent(kDiamondM, PacketKind::Query) == 1);

    SUBCASE("second copy from another neighbor is dropped") {
      b.net.handle_query(kDiamondM, JoinQuery{kDiamondS, 7, kDiamondB, {kDiamondS, kDiamondB}},
                         1.001);
      CHECK(b.net.state(kDiamondM).upstream.at(k7) == kDiamondA);
      CHECK(b.sent(kDiamondM, PacketKind::Query) == 1);
      CHECK(b.trace.duplicate_drops == 1);
    }
    SUBCASE("next round is fresh") {
      b.net.handle_query(kDiamondM, JoinQuery{kDiamondS, 8, kDiamondB, {kDiamondS, kDiamondB}},
                         4.0);
      CHECK(b.net.state(kDiamondM).upstream.at(round_key(kDiamondS, 8)) == kDiamondB);
      CHECK(b.sent(kDiamondM, PacketKind::Query) == 2);
      CHECK(b.trace.duplicate_drops == 0);
    }
  }
  SUBCASE("rebroadcast appends the relay to the hop record") {
    std::vector<JoinQuery> heard;
    b.net.handle_query(kDiamondM, JoinQuery{kDiamondS, 7, kDiamondA, {kDiamondS, kDiamondA}}, 1.0);
    b.sched.run_until(2.0, [&](const NetEvent& ev) {
      const auto& arr = std::get<PacketArrival>(ev.payload);
      heard.push_back(std::get<JoinQuery>(*arr.packet));
    });
    REQUIRE(heard.size() == 3);  // A, B, R
    for (const auto& q : heard) {
      CHECK(q.prev_hop == kDiamondM);
      CHECK(q.hop_record == std::vector<NodeId>{kDiamondS, kDiamondA, kDiamondM});
    }
  }
  SUBCASE("a receiver also replies toward its upstream") {
    b.net.handle_query(kDiamondR, JoinQuery{kDiamondS, 7, kDiamondM, {kDiamondS, kDiamondM}}, 1.0);
    CHECK(b.sent(kDiamondR, PacketKind::Reply) == 1);
    std::vector<JoinReply> replies;
    b.sched.run_until(2.0, [&](const NetEvent& ev) {
      const auto& arr = std::get<PacketArrival>(ev.payload);
      if (auto* r = std::get_if<JoinReply>(arr.packet.get())) replies.push_back(*r);
    });
    REQUIRE(replies.size() == 1);
    CHECK(replies[0].next_hop == kDiamondM);
    CHECK(replies[0].receiver == kDiamondR);
  }
}

TEST_CASE("handle_reply") {
  Bench b(diamond(), diamond_members());
  b.net.handle_query(kDiamondM, JoinQuery{kDiamondS, 7, kDiamondA, {kDiamondS, kDiamondA}}, 1.0);
  const std::size_t before = b.trace.transmissions.size();

  SUBCASE("reply naming the node sets fg and relays to its upstream") {
    b.net.handle_reply(kDiamondM, JoinReply{kDiamondS, 7, kDiamondR, kDiamondM, {kDiamondR}}, 2.0);
    CHECK(b.net.state(kDiamondM).fg_expiry == 8.0);
    CHECK(b.net.state(kDiamondM).fg_live(7.999));
    CHECK_FALSE(b.net.state(kDiamondM).fg_live(8.0));
    REQUIRE(b.trace.fg_grants.size() == 1);
    CHECK(b.sent(kDiamondM, PacketKind::Reply) == 1);
    std::vector<JoinReply> out;
    b.sched.run_until(3.0, [&](const NetEvent& ev) {
      const auto& arr = std::get<PacketArrival>(ev.payload);
      if (auto* r = std::get_if<JoinReply>(arr.packet.get())) out.push_back(*r);
    });
    REQUIRE_FALSE(out.empty());
    CHECK(out[0].next_hop == kDiamondA);
  }
  SUBCASE("reply naming another node is ignored") {
    b.net.handle_reply(kDiamondM, JoinReply{kDiamondS, 7, kDiamondR, kDiamondB, {kDiamondR}}, 2.0);
    CHECK_FALSE(b.net.state(kDiamondM).fg_expiry.has_value());
    CHECK(b.trace.transmissions.size() == before);
    CHECK(b.trace.fg_grants.empty());
  }
  SUBCASE("reply reaching the source ends the chain") {
    b.net.handle_reply(kDiamondS, JoinReply{kDiamondS, 7, kDiamondR, kDiamondS, {kDiamondR}}, 2.0);
    CHECK(b.net.state(kDiamondS).fg_expiry.has_value());
    CHECK(b.trace.transmissions.size() == before);
  }
  SUBCASE("missing upstream counts a stale reply") {
    b.net.handle_reply(kDiamondB, JoinReply{kDiamondS, 7, kDiamondR, kDiamondB, {kDiamondR}}, 2.0);
    CHECK(b.trace.stale_replies == 1);
    CHECK(b.trace.transmissions.size() == before);
  }
}

TEST_CASE("data forwarding") {
  Bench b(diamond(), diamond_members());

  SUBCASE("origin_time is the emission clock") {
    b.net.originate_data(kDiamondS, 0, 2.5);
    REQUIRE(b.trace.data.size() == 1);
    CHECK(b.trace.data[0].origin == 2.5);
    std::vector<DataPacket> heard;
    b.sched.run_until(3.0, [&](const NetEvent& ev) {
      heard.push_back(std::get<DataPacket>(*std::get<PacketArrival>(ev.payload).packet));
    });
    REQUIRE(heard.size() == 2);
    CHECK(heard[0].origin_time == 2.5);
  }
  SUBCASE("plain node caches but does not forward") {
    b.net.forward_data(kDiamondB, DataPacket{kDiamondS, 0, 0.5, {kDiamondS}}, 0.6);
    CHECK(b.sent(kDiamondB, PacketKind::Data) == 0);
    CHECK(b.net.state(kDiamondB).data_cache.count(round_key(kDiamondS, 0)) == 1);
  }
  SUBCASE("fg member forwards its first copy only") {
    b.net.handle_query(kDiamondM, JoinQuery{kDiamondS, 0, kDiamondA, {kDiamondS, kDiamondA}}, 0.1);
    b.net.handle_reply(kDiamondM, JoinReply{kDiamondS, 0, kDiamondR, kDiamondM, {kDiamondR}}, 0.2);
    b.net.forward_data(kDiamondM, DataPacket{kDiamondS, 0, 0.5, {kDiamondS, kDiamondA}}, 0.6);
    b.net.forward_data(kDiamondM, DataPacket{kDiamondS, 0, 0.5, {kDiamondS, kDiamondB}}, 0.61);
    CHECK(b.sent(kDiamondM, PacketKind::Data) == 1);
    CHECK(b.trace.duplicate_drops == 1);
  }
  SUBCASE("receiver hearing two copies records one delivery") {
    b.net.forward_data(kDiamondR, DataPacket{kDiamondS, 0, 0.5, {kDiamondS, kDiamondA, kDiamondM}},
                       0.6);
    b.net.forward_data(kDiamondR, DataPacket{kDiamondS, 0, 0.5, {kDiamondS, kDiamondB, kDiamondM}},
                       0.7);
    REQUIRE(b.trace.deliveries.size() == 1);
    CHECK(b.trace.deliveries[0].arrival == 0.6);
    CHECK(b.trace.deliveries[0].hop_record ==
          std::vector<NodeId>{kDiamondS, kDiamondA, kDiamondM});
  }
}

TEST_CASE("data origination is deterministic per seed") {
  Scenario s = static_scenario(diamond(), kDiamondS, {kDiamondR}, 30.0, 4);
  const RunTrace a = simulate(s);
  const RunTrace b = simulate(s);
  REQUIRE(a.deliveries.size() == b.deliveries.size());
  for (std::size_t i = 0; i < a.deliveries.size(); ++i) {
    CHECK(a.deliveries[i].arrival == b.deliveries[i].arrival);
  }
}

TEST_CASE("protocol properties on random topologies") {
  std::uint64_t seed = 100;
  for (int trial = 0; trial < 20; ++trial, ++seed) {
    const bool mobile = trial % 2 == 1;
    auto pos = mobile ? init_world({500.0, 500.0}, 20, seed) : connected_topology(seed);
    Scenario s = static_scenario(pos, 0, {1, 2, 3, 4, 5}, 30.0, seed);
    s.area = {500.0, 500.0};
    if (mobile) {
      s.speed = 10.0;
    }
    Simulation sim(s);
    const RunTrace& t = sim.run();
    CAPTURE(seed);
    CAPTURE(mobile);

    // suppression and flood bound
    std::map<std::pair<NodeId, std::uint32_t>, int> per_node_round;
    std::map<std::uint32_t, int> per_round;
    for (const auto& tx : t.transmissions) {
      if (tx.kind == PacketKind::Query) {
        ++per_node_round[{tx.node, tx.seq}];
        ++per_round[tx.seq];
      }
    }
    for (const auto& [k, c] : per_node_round) {
      CHECK(c == 1);
    }
    for (const auto& [r, c] : per_round) {
      CHECK(c <= 20);
    }

    // fg soundness: every grant is a chain member of that round
    std::set<std::pair<NodeId, std::uint32_t>> reply_senders;
    for (const auto& tx : t.transmissions) {
      if (tx.kind == PacketKind::Reply) reply_senders.insert({tx.node, tx.seq});
    }
    for (const auto& g : t.fg_grants) {
      if (!mobile) {
        CHECK((g.node == t.sender || reply_senders.count({g.node, g.round}) > 0));
      }
    }

    if (!mobile) {
      CHECK(t.stale_replies == 0);
      // delivery soundness: hop records are radio chains ending at the receiver
      for (const auto& d : t.deliveries) {
        REQUIRE_FALSE(d.hop_record.empty());
        CHECK(d.hop_record.front() == t.sender);
        for (std::size_t i = 0; i + 1 < d.hop_record.size(); ++i) {
          CHECK(distance(pos[d.hop_record[i]], pos[d.hop_record[i + 1]]) <= 250.0);
        }
        CHECK(distance(pos[d.hop_record.back()], pos[d.receiver]) <= 250.0);
      }
      // eventual delivery of every round's query
      for (NodeId r : t.receivers) {
        for (const auto& round : t.rounds) {
          CHECK(sim.network().state(r).query_cache.count(round_key(t.sender, round.round)) == 1);
        }
      }
      CHECK(packet_delivery_ratio(t).value == 1.0);
    }
  }
}
