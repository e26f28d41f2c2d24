#include <doctest.h>

#include "sagin/dof.hpp"

using namespace sagin;

TEST_SUITE("dof") {

TEST_CASE("csi-free evaluator") {
  CHECK(dof_t1(6, 3) == Rational(21, 2));
  CHECK(dof_t1(1, 2) == Rational(2, 1));
  CHECK(dof_t1(10, 2) == Rational(11, 1));
  // kd sweep 2 -> 10 at fixed n: relative gain 8/3.
  const Rational gain = (dof_t1(10, 2) - dof_t1(2, 2)) / dof_t1(2, 2);
  CHECK(gain == Rational(8, 3));
}

TEST_CASE("instantaneous evaluator walks the three antenna regimes") {
  CHECK(dof_t2(21, 6, 3).dof == Rational(21, 1));
  CHECK(dof_t2(21, 6, 3).regime == DofRegime::IcsiFull);
  CHECK(dof_t2(10, 6, 3).dof == Rational(14, 1));
  CHECK(dof_t2(10, 6, 3).regime == DofRegime::IcsiDeficient);
  CHECK(dof_t2(3, 6, 3).dof == Rational(21, 2));
  CHECK(dof_t2(3, 6, 3).regime == DofRegime::IcsiFallback);
  CHECK(psi(6, 3) == 7);
}

TEST_CASE("instantaneous evaluator is nondecreasing in satellite antennas") {
  for (int kd : {2, 4, 6}) {
    for (int n : {2, 3, 4}) {
      Rational prev(0, 1);
      for (int ms = 1; ms <= (kd + 1) * n + 5; ++ms) {
        const Rational cur = dof_t2(ms, kd, n).dof;
        CHECK(cur >= prev);
        prev = cur;
      }
      // Below and at psi the fallback equals the CSI-free value.
      for (int ms = 1; ms <= psi(kd, n); ++ms) CHECK(dof_t2(ms, kd, n).dof == dof_t1(kd, n));
    }
  }
}

TEST_CASE("delayed evaluator with the selection condition") {
  CHECK(dof_t3(21, 6, 3).dof == Rational(111, 8));
  CHECK(dof_t3(21, 6, 3).regime == DofRegime::DcsiSpacetime);
  CHECK(dof_t3(99, 6, 3).dof == Rational(579, 34));
  CHECK(dof_t3(3, 6, 3).dof == Rational(21, 2));
  CHECK(dof_t3(3, 6, 3).regime == DofRegime::DcsiFallback);
}

TEST_CASE("space-time branch matches the session count at full antennas") {
  for (int kd = 2; kd <= 10; ++kd)
    for (int n = 2; n <= 4; ++n)
      CHECK(dcsi_spacetime_dof((kd + 1) * n, kd, n) ==
            Rational(static_cast<long long>(kd) * kd + 1, 1) * Rational(n, kd + 2));
}

TEST_CASE("fallback fires exactly when the condition fails") {
  for (int kd = 2; kd <= 8; ++kd) {
    for (int n = 2; n <= 4; ++n) {
      for (int ms = 1; ms <= (kd + 1) * n + 8; ++ms) {
        const auto p = dof_t3(ms, kd, n);
        if (dcsi_condition_holds(ms, kd, n)) {
          CHECK(p.dof == dcsi_spacetime_dof(ms, kd, n));
        } else {
          CHECK(p.dof == dof_t1(kd, n));
        }
      }
    }
  }
}

TEST_CASE("ordering at full satellite antennas") {
  for (int kd = 2; kd <= 10; ++kd) {
    for (int n = 2; n <= 4; ++n) {
      const int ms = (kd + 1) * n;
      const Rational t1 = dof_t1(kd, n);
      const Rational t2 = dof_t2(ms, kd, n).dof;
      const Rational t3 = dof_t3(ms, kd, n).dof;
      CHECK(t1 <= t3);
      CHECK(t3 <= t2);
    }
  }
}

TEST_CASE("all evaluators coincide at the minimum satellite array") {
  for (int kd = 2; kd <= 8; ++kd) {
    for (int n = 2; n <= 4; ++n) {
      CHECK(dof_t2(n, kd, n).dof == dof_t1(kd, n));
      CHECK(dof_t3(n, kd, n).dof == dof_t1(kd, n));
    }
  }
}

TEST_CASE("scheme selection follows the satellite's CSI") {
  const auto delayed = select_scheme(CsiType::Delayed, 21, 6, 3);
  CHECK(delayed.scheme == SchemeId::Dcsi);
  CHECK(delayed.point.dof == Rational(111, 8));
  CHECK(delayed.point.regime == DofRegime::DcsiSpacetime);

  const auto blind = select_scheme(CsiType::None, 99, 6, 3);
  CHECK(blind.scheme == SchemeId::NoCsi);
  CHECK(blind.point.dof == Rational(21, 2));

  const auto boundary = select_scheme(CsiType::Instantaneous, 7, 6, 3);
  CHECK(boundary.point.dof == Rational(21, 2));
  CHECK(boundary.point.regime == DofRegime::IcsiFallback);

  const auto moderate = select_scheme(CsiType::ModeratelyDelayed, 21, 6, 3);
  CHECK(moderate.scheme == SchemeId::Icsi);
  CHECK(moderate.point.dof == Rational(21, 1));
}

TEST_CASE("satellite-antenna sweep reproduces the plateau structure") {
  SweepSpec spec;
  spec.axis = SweepAxis::Ms;
  spec.lo = 3;
  spec.hi = 99;
  spec.kd = 6;
  spec.n = 3;
  const auto rows = sweep(spec);
  REQUIRE(rows.size() == 3 * 97);

  Rational prev_icsi(0, 1);
  for (const auto& row : rows) {
    if (row.csi == CsiType::Instantaneous) {
      CHECK(row.dof >= prev_icsi);
      prev_icsi = row.dof;
      if (row.ms >= 21) CHECK(row.dof == Rational(21, 1));
    }
    if (row.csi == CsiType::None) CHECK(row.dof == Rational(21, 2));
  }
  // Delayed never beats instantaneous at the same antenna count.
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    CHECK(rows[i + 2].csi == CsiType::Delayed);
    CHECK(rows[i + 2].dof <= rows[i + 1].dof);
  }
}

TEST_CASE("per-terminal-antenna sweep keeps the factor-two gap") {
  SweepSpec spec;
  spec.axis = SweepAxis::N;
  spec.lo = 2;
  spec.hi = 8;
  spec.kd = 6;
  spec.ms_full_antenna = true;
  const auto rows = sweep(spec);
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    const Rational blind = rows[i].dof;
    const Rational inst = rows[i + 1].dof;
    CHECK(inst == blind * Rational(2, 1));
  }
}

TEST_CASE("csv emission is stable and exact") {
  SweepSpec spec;
  spec.axis = SweepAxis::Ms;
  spec.lo = 21;
  spec.hi = 21;
  spec.kd = 6;
  spec.n = 3;
  const auto text = sweep_csv(sweep(spec));
  CHECK(text.find("scheme,csi,kd,n,ms,l,dof_num,dof_den,regime") == 0);
  CHECK(text.find("dcsi,delayed,6,3,21,333,111,8,dcsi-spacetime") != std::string::npos);
  CHECK(text.find("icsi,instantaneous,6,3,21,324,21,1,icsi-full") != std::string::npos);
}

TEST_CASE("empty axis is rejected") {
  SweepSpec spec;
  spec.lo = 5;
  spec.hi = 4;
  CHECK_THROWS_AS(sweep(spec), std::invalid_argument);
}

}  // TEST_SUITE
