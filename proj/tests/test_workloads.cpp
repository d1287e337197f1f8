// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lagom/model.hpp"
#include "lagom/workloads.hpp"

using namespace lagom;

TEST_CASE("fsdp: one layer gives one compute and two comms") {
  const Workload w = gen_fsdp(1, 3);
  CHECK(w.compute_ops.size() == 1);
  CHECK(w.comm_ops.size() == 2);
  CHECK(w.comm_ops[0].collective == Collective::AllGather);
  CHECK(w.comm_ops[1].collective == Collective::ReduceScatter);
  CHECK_FALSE(w.comm_ops[0].ready_after.has_value());
  CHECK(w.comm_ops[1].ready_after == std::optional<std::string>("mm0"));
  CHECK_NOTHROW(validate(w));
}

TEST_CASE("fsdp: fixed seed gives a stable workload") {
  const Workload a = gen_fsdp(4, 7);
  const Workload b = gen_fsdp(4, 7);
  CHECK(a == b);
  CHECK(a.compute_ops.size() == 4);
  CHECK(a.comm_ops.size() == 8);
  // Later layers prefetch: their AllGather is gated on the previous compute.
  CHECK(a.comm_ops[2].ready_after == std::optional<std::string>("mm0"));
  CHECK_NOTHROW(validate(a));
  CHECK(gen_fsdp(4, 8) != a);
}

TEST_CASE("tp pattern: one compute and one AllReduce per layer") {
  const Workload w = gen_tp_domino(3, 5);
  CHECK(w.compute_ops.size() == 3);
  CHECK(w.comm_ops.size() == 3);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(w.comm_ops[l].collective == Collective::AllReduce);
    CHECK(w.comm_ops[l].ready_after ==
          std::optional<std::string>("mm" + std::to_string(l)));
  }
  CHECK(gen_tp_domino(3, 5) == w);
  CHECK_NOTHROW(validate(w));
}

TEST_CASE("ep pattern: paired AlltoAll around each expert compute") {
  const Workload w = gen_ep_dualbatch(2, 11);
  CHECK(w.compute_ops.size() == 2);
  CHECK(w.comm_ops.size() == 4);
  for (const auto& op : w.comm_ops)
    CHECK(op.collective == Collective::AllToAll);
  CHECK(w.comm_ops[1].ready_after == std::optional<std::string>("ex0"));
  CHECK(w.comm_ops[2].ready_after == std::optional<std::string>("ex0"));
  CHECK(gen_ep_dualbatch(2, 11) == w);
  CHECK_NOTHROW(validate(w));
}

TEST_CASE("allreduce pair: 2 AllReduce racing 7 compute ops, B dominant") {
  const Workload w = gen_allreduce_pair();
  CHECK(w.compute_ops.size() == 7);
  CHECK(w.comm_ops.size() == 2);
  CHECK(w.comm_ops[0].id == "ar_a");
  CHECK(w.comm_ops[1].id == "ar_b");
  CHECK(w.comm_ops[0].collective == Collective::AllReduce);
  CHECK(w.comm_ops[1].collective == Collective::AllReduce);
  CHECK(w.comm_ops[1].message_bytes > w.comm_ops[0].message_bytes);
  CHECK_FALSE(w.comm_ops[0].ready_after.has_value());
  CHECK_FALSE(w.comm_ops[1].ready_after.has_value());
  CHECK_NOTHROW(validate(w));
  CHECK(gen_allreduce_pair() == w);
}

TEST_CASE("random generator: degenerate shapes stay valid") {
  CHECK_NOTHROW(validate(gen_random(0, 1, 1)));
  CHECK_NOTHROW(validate(gen_random(1, 0, 1)));
  const Workload w = gen_random(0, 1, 123);
  CHECK(w.compute_ops.empty());
  CHECK(w.comm_ops.size() == 1);
  CHECK_FALSE(w.comm_ops[0].ready_after.has_value());
}

TEST_CASE("random generator: same seed same workload, 20 seeds validate") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Workload w = gen_random(4, 3, seed);
    CHECK(w == gen_random(4, 3, seed));
    CHECK_NOTHROW(validate(w));
  }
  CHECK(gen_random(4, 3, 1) != gen_random(4, 3, 2));
}

TEST_CASE("default gpu is the documented fixed device") {
  const GpuSpec gpu = default_gpu();
  CHECK(gpu.num_sms == 64);
  CHECK(gpu.peak_mem_bw == 600.0);
  CHECK(gpu.link_bw == 400.0);
  CHECK(gpu.comm_bw_cap_fraction == 0.6);
  CHECK(gpu.compute_on_comm_slowdown == 0.0);
}
