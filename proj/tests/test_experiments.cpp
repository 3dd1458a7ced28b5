#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "msqp/experiments.hpp"

using namespace msqp;

TEST(Experiments, TableCsvIsStable) {
  BenchmarkTable t;
  t.columns = {"a", "b"};
  t.add_row({format_number(0.1), "x"});
  t.add_row({format_number(1.0 / 3.0), "y"});
  std::ostringstream out;
  t.write_csv(out);
  EXPECT_EQ(out.str(), "a,b\n0.1,x\n0.333333333333,y\n");
  EXPECT_DOUBLE_EQ(t.number(1, "a"), 0.333333333333);
  EXPECT_EQ(t.text(0, "b"), "x");
  EXPECT_THROW(t.column("c"), ConfigError);
  EXPECT_THROW(t.add_row({"1"}), NumericalError);
}

TEST(Experiments, ParallelForCoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(37);
  parallel_for(37, 4, [&](int i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Experiments, ParallelForRethrowsLowestIndex) {
  try {
    parallel_for(10, 3, [](int i) {
      if (i == 7 || i == 4) throw std::runtime_error("job " + std::to_string(i));
    });
    FAIL() << "no exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "job 4");
  }
}

TEST(Experiments, WorkerCountFromEnvironment) {
  ::setenv("MSQP_WORKERS", "3", 1);
  EXPECT_EQ(worker_count(), 3);
  ::unsetenv("MSQP_WORKERS");
  EXPECT_GE(worker_count(), 1);
}

TEST(Experiments, HeisenbergReference) {
  // S1·S2 = SWAP/2 - 1/4: |01> -> |10> with probability sin²(Jt/2); |00> only picks up a phase.
  for (double jt : {0.3, 1.0, 2.5}) {
    const Matrix u = heisenberg_exact(jt);
    EXPECT_NEAR(std::norm(u(2, 1)), std::pow(std::sin(jt / 2.0), 2), 1e-12);
    EXPECT_NEAR(std::abs(u(0, 0) - std::exp(-kI * jt / 4.0)), 0.0, 1e-12);
  }
}

TEST(Experiments, TrotterConvergesToExact) {
  const double tb = 2.0;
  const double e10 = (tim_trotter(tb, 10) - tim_exact(tb)).cwiseAbs().maxCoeff();
  const double e100 = (tim_trotter(tb, 100) - tim_exact(tb)).cwiseAbs().maxCoeff();
  EXPECT_LT(e100, e10);
  EXPECT_NEAR(e10 / e100, 10.0, 1.5);  // first order
  EXPECT_LT((tim_trotter(0.0, 3) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Experiments, DeutschJozsaSmallRunIsDeterministic) {
  ExperimentConfig c = default_config("deutsch_jozsa");
  c.oracles = {1, 3};
  c.b1_gauss = {5.0};
  c.t2_us = {std::numeric_limits<double>::infinity()};
  const BenchmarkTable a = run_deutsch_jozsa(c, 1);
  const BenchmarkTable b = run_deutsch_jozsa(c, 2);
  std::ostringstream sa, sb;
  a.write_csv(sa);
  b.write_csv(sb);
  EXPECT_EQ(sa.str(), sb.str());
  ASSERT_EQ(a.rows.size(), 2u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_LT(a.number(i, "error"), 1e-2);
    EXPECT_GT(a.number(i, "duration_ns"), 0.0);
  }
}
