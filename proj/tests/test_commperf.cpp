// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lagom/commperf.hpp"
#include "lagom/error.hpp"
#include "support.hpp"

using namespace lagom;
using lagom_test::make_config;
using lagom_test::ring_simple_p2p;
using lagom_test::single_subspace;

namespace {

// alpha=10, b_chan=100, c_over=1, zeta=0, eta == 1 for all NT.
SubspaceParams flat_params() {
  SubspaceCoeffs c;
  c.base_latency = 10.0;
  c.per_channel_bw = 100.0;
  c.per_chunk_overhead = 1.0;
  c.per_channel_setup = 0.0;
  c.nt_floor = 1.0;
  return single_subspace(c);
}

CommOp gather_op(std::int64_t bytes) {
  CommOp op;
  op.id = "k";
  op.collective = Collective::AllGather;  // traffic factor 1
  op.message_bytes = bytes;
  return op;
}

GpuSpec link_capped_gpu() {
  GpuSpec gpu;
  gpu.link_bw = 1000.0;
  gpu.peak_mem_bw = 1000.0;
  return gpu;
}

}  // namespace

TEST_CASE("comm_time evaluates the latency + chunk + transfer form") {
  const auto params = flat_params();
  const auto gpu = link_capped_gpu();
  const CommOp op = gather_op(1000000);
  // chunks = ceil(1e6 / (4 * 50000)) = 5, eff_bw = 400.
  CHECK(comm_time(op, make_config(ring_simple_p2p(), 4, 640, 50000), gpu, params) ==
        doctest::Approx(2515.0).epsilon(1e-12));
  // NC=16 caps at link_bw: transfer 1000, chunks = ceil(1e6/8e5) = 2.
  CHECK(comm_time(op, make_config(ring_simple_p2p(), 16, 640, 50000), gpu, params) ==
        doctest::Approx(1012.0).epsilon(1e-12));
  // Doubling NC past the cap leaves the transfer term unchanged.
  CHECK(comm_time(op, make_config(ring_simple_p2p(), 32, 640, 50000), gpu, params) ==
        doctest::Approx(1011.0).epsilon(1e-12));
  // One huge chunk amortizes the per-chunk overhead away.
  CHECK(comm_time(op, make_config(ring_simple_p2p(), 4, 640, 1000000), gpu, params) ==
        doctest::Approx(2511.0).epsilon(1e-12));
}

TEST_CASE("comm_time throws on an unknown subspace") {
  const auto params = flat_params();
  const auto cfg =
      make_config(SubspaceKey{Algorithm::Tree, Protocol::Ll, Transport::Shm}, 4,
                  128, 64 * kKiB);
  CHECK_THROWS_AS(comm_time(gather_op(1000), cfg, GpuSpec{}, params), Error);
}

TEST_CASE("all_reduce traffic counts twice by default") {
  const auto params = flat_params();
  const auto gpu = link_capped_gpu();
  CommOp ar = gather_op(1000000);
  ar.collective = Collective::AllReduce;
  // m_eff = 2e6: chunks = 10, transfer = 5000.
  CHECK(comm_time(ar, make_config(ring_simple_p2p(), 4, 640, 50000), gpu, params) ==
        doctest::Approx(10.0 + 10.0 + 5000.0).epsilon(1e-12));
}

TEST_CASE("mem_footprint follows kappa * NC * saturation * b_chan with a cap") {
  SubspaceCoeffs c;
  c.per_channel_bw = 100.0;
  c.mem_coeff = 0.5;
  c.chunk_knee = 64 * kKiB;
  const auto params = single_subspace(c);
  GpuSpec gpu;
  gpu.peak_mem_bw = 1000.0;
  gpu.comm_bw_cap_fraction = 0.6;

  // C == knee -> saturation 1/2.
  CHECK(mem_footprint(make_config(ring_simple_p2p(), 4, 128, 64 * kKiB), gpu,
                      params) == doctest::Approx(100.0).epsilon(1e-12));

  SubspaceCoeffs zero = c;
  zero.mem_coeff = 0.0;
  const auto zero_params = single_subspace(zero);
  CHECK(mem_footprint(make_config(ring_simple_p2p(), 16, 128, 4096 * kKiB), gpu,
                      zero_params) == 0.0);

  // Huge NC*C clamps at phi * peak.
  CHECK(mem_footprint(make_config(ring_simple_p2p(), 63, 128, 1 << 30), gpu,
                      params) == doctest::Approx(600.0).epsilon(1e-12));
}

TEST_CASE("x(NC) is non-increasing up to the link cap, non-decreasing after") {
  const auto params = SubspaceParams::defaults();
  const GpuSpec gpu = lagom_test::default_gpu();
  const CommOp op = gather_op(8192 * kKiB);
  const SubspaceCoeffs& c = params.at(ring_simple_p2p());

  // Chunk size large enough that chunk-count effects die out before the cap.
  const std::int64_t chunk = 1024 * kKiB;
  std::vector<double> xs;
  int cap_index = -1;
  for (int nc = 1; nc <= 32; ++nc) {
    xs.push_back(
        comm_time(op, make_config(ring_simple_p2p(), nc, 128, chunk), gpu, params));
    const double eta = thread_efficiency(128, c.nt_floor);
    if (cap_index < 0 && nc * c.per_channel_bw * eta >= gpu.link_bw)
      cap_index = nc - 1;
  }
  REQUIRE(cap_index > 0);
  for (int i = 1; i <= cap_index; ++i) CHECK(xs[i] <= xs[i - 1] + 1e-9);
  for (std::size_t i = cap_index + 1; i < xs.size(); ++i)
    CHECK(xs[i] >= xs[i - 1] - 1e-9);
}

TEST_CASE("x(C) is non-increasing with the amortization limit") {
  const auto params = SubspaceParams::defaults();
  const GpuSpec gpu = lagom_test::default_gpu();
  const CommOp op = gather_op(8192 * kKiB);
  const SubspaceCoeffs& c = params.at(ring_simple_p2p());

  double prev = -1.0;
  for (std::int64_t chunk = 32 * kKiB; chunk <= 8192 * kKiB; chunk *= 2) {
    const double x =
        comm_time(op, make_config(ring_simple_p2p(), 4, 128, chunk), gpu, params);
    if (prev >= 0) CHECK(x <= prev + 1e-9);
    prev = x;
  }
  // Limit: one chunk left.
  const double eta = thread_efficiency(128, c.nt_floor);
  const double eff = std::min(4 * c.per_channel_bw * eta, gpu.link_bw);
  const double limit = c.base_latency + 4 * c.per_channel_setup +
                       c.per_chunk_overhead +
                       static_cast<double>(op.message_bytes) / eff;
  CHECK(prev == doctest::Approx(limit).epsilon(1e-12));
}

TEST_CASE("V is monotone in NC and C and stays below peak bandwidth") {
  const auto params = SubspaceParams::defaults();
  const GpuSpec gpu = lagom_test::default_gpu();
  double prev = -1.0;
  for (int nc = 1; nc <= 32; ++nc) {
    const double v =
        mem_footprint(make_config(ring_simple_p2p(), nc, 128, 512 * kKiB), gpu, params);
    CHECK(v >= 0.0);
    CHECK(v < gpu.peak_mem_bw);
    CHECK(v >= prev);
    prev = v;
  }
  prev = -1.0;
  for (std::int64_t chunk = 32 * kKiB; chunk <= 8192 * kKiB; chunk *= 2) {
    const double v =
        mem_footprint(make_config(ring_simple_p2p(), 8, 128, chunk), gpu, params);
    CHECK(v >= prev);
    CHECK(v < gpu.peak_mem_bw);
    prev = v;
  }
}

TEST_CASE("NT alone moves x by at most (1-eta0)/eta0 and never moves V") {
  const auto params = SubspaceParams::defaults();  // nt_floor = 0.85
  const GpuSpec gpu = lagom_test::default_gpu();
  const CommOp op = gather_op(4096 * kKiB);
  for (int nc : {1, 4, 16}) {
    for (std::int64_t chunk : {64 * kKiB, 1024 * kKiB}) {
      double x_min = 1e300, x_max = 0.0;
      double v_first = -1.0;
      for (int nt : kThreadLadder) {
        const auto cfg = make_config(ring_simple_p2p(), nc, nt, chunk);
        const double x = comm_time(op, cfg, gpu, params);
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        const double v = mem_footprint(cfg, gpu, params);
        if (v_first < 0)
          v_first = v;
        else
          CHECK(v == v_first);
      }
      CHECK((x_max - x_min) / x_min <= (1.0 - 0.85) / 0.85 + 1e-12);
    }
  }
}

TEST_CASE("subspace keys print and parse") {
  const SubspaceKey key{Algorithm::Tree, Protocol::Ll128, Transport::Net};
  CHECK(to_string(key) == "TREE/LL128/NET");
  CHECK(subspace_key_from_string("TREE/LL128/NET") == key);
  CHECK_THROWS_AS(subspace_key_from_string("TREE-LL128-NET"), Error);
}
