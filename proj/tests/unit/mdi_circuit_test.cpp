#include <cmath>

#include <gtest/gtest.h>

#include "cvmdi/errors.hpp"
#include "cvmdi/key_rate.hpp"
#include "cvmdi/mdi_circuit.hpp"
#include "support/oracle.hpp"

namespace cvmdi {
namespace {

ProtocolParams ten_km_practical() {
  ProtocolParams p;
  p.v_a = p.v_b = 1e5;
  p.l_ac = p.l_bc = 10;
  p.eta = 0.9;
  p.v_el = 0.015;
  return p;
}

TEST(ChannelTransmittance, Examples) {
  EXPECT_EQ(channel_transmittance(0, 0.2), 1);
  EXPECT_NEAR(static_cast<double>(channel_transmittance(50, 0.2)), 0.1, 1e-16);
  EXPECT_NEAR(static_cast<double>(channel_transmittance(25, 0.2)),
              0.31622776601683793320, 1e-16);
  EXPECT_THROW(channel_transmittance(-1, 0.2), InvalidParameter);
}

TEST(ClonerVariance, Examples) {
  EXPECT_EQ(*cloner_variance(0.3, 0), 1);
  EXPECT_NEAR(static_cast<double>(*cloner_variance(0.1, 0.002)),
              1 + 0.0002 / 0.9, 1e-15);
  EXPECT_FALSE(cloner_variance(1, 0.002).has_value());
  EXPECT_THROW(cloner_variance(0, 0.002), InvalidParameter);
}

TEST(ClonerVariance, OutputVarianceIsInputReferred) {
  const Real t = 0.5;
  const Real v = 2;
  const Real w = *cloner_variance(t, 0.002);
  EXPECT_NEAR(static_cast<double>(t * v + (1 - t) * w), 1.501, 1e-15);
  EXPECT_NEAR(static_cast<double>(t * v + (1 - t) * w),
              static_cast<double>(t * (v + (1 - t) / t + 0.002L)), 1e-15);
}

TEST(DetectorAncilla, Examples) {
  EXPECT_NEAR(static_cast<double>(*detector_ancilla_variance(0.9, 0.015)), 1.15,
              1e-15);
  EXPECT_FALSE(detector_ancilla_variance(1, 0).has_value());
  EXPECT_THROW(detector_ancilla_variance(1, 0.01), InvalidParameter);
}

// Lossless, noiseless relay with EPR(V) on both sides and C = (A2 - B2)/sqrt2,
// D = (A2 + B2)/sqrt2: a = V, b = V (1 + g^2) - sqrt2 g c0, c = g c0 / sqrt2
// with c0 = sqrt(V^2 - 1). The determinant ab - c^2 is smallest at
// g = sqrt2 c0 V / (2V^2 - c0^2), where it equals 2V^2 / (V^2 + 1) > 1, so
// the kept state is mixed for every V > 1.
TEST(BuildMdiState, LosslessNoiselessMatchesClosedForm) {
  for (double v : {1.5, 5.04, 1e3, 1e5}) {
    ProtocolParams p;
    p.v_a = p.v_b = v;
    p.eps1 = p.eps2 = 0;
    const MdiCircuit circuit(p);
    const Real V = v;
    const Real c0 = std::sqrt(V * V - 1);
    for (Real g : {0.0L, 0.5L, 1.4L, 2.5L}) {
      const TwoModeCov tm = extract_two_mode(circuit.alice_bob(g));
      const Real b = V * (1 + g * g) - std::sqrt(2.0L) * g * c0;
      const Real c = g * c0 / std::sqrt(2.0L);
      EXPECT_NEAR(static_cast<double>(tm.a / V), 1.0, 1e-15);
      EXPECT_NEAR(static_cast<double>(tm.b / b), 1.0, 1e-12) << v << " " << double(g);
      if (g > 0) {
        EXPECT_NEAR(static_cast<double>(tm.c / c), 1.0, 1e-15);
      }
    }
    const Real g_min = std::sqrt(2.0L) * c0 * V / (2 * V * V - c0 * c0);
    const TwoModeCov tm = extract_two_mode(circuit.alice_bob(g_min));
    EXPECT_NEAR(static_cast<double>((tm.a * tm.b - tm.c * tm.c) / (2 * V * V / (V * V + 1))),
                1.0, 1e-9)
        << v;
  }
}

TEST(BuildMdiState, VacuumInputsArePure) {
  ProtocolParams p;
  p.v_a = p.v_b = 1;
  p.eps1 = p.eps2 = 0;
  p.gain = 0.0;
  for (Real l : symplectic_eigenvalues(build_mdi_state(p)).eigenvalues) {
    EXPECT_NEAR(static_cast<double>(l), 1.0, 1e-12);
  }
}

TEST(BuildMdiState, HasTwoModeBlockStructure) {
  const GaussianState s = build_mdi_state(ten_km_practical());
  const Matrix& m = s.cov();
  const Real scale = m.cwiseAbs().maxCoeff();
  EXPECT_NEAR(static_cast<double>((m(0, 0) - m(1, 1)) / scale), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>((m(2, 2) - m(3, 3)) / scale), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>((m(0, 2) + m(1, 3)) / scale), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(m(0, 1) / scale), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(m(0, 3) / scale), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(m(1, 2) / scale), 0.0, 1e-15);
  EXPECT_NO_THROW(extract_two_mode(s));
}

TEST(BuildMdiState, TrustedNoiseAddsTwoModes) {
  ProtocolParams p = ten_km_practical();
  p.protocol = Protocol::SqueezedModified;
  p.gain = 1.2;
  const GaussianState s = build_mdi_state(p, AddedNoiseParams{0.7, 3});
  EXPECT_EQ(s.modes(), 4u);
  EXPECT_TRUE(is_physical(s));
}

TEST(ExtractTwoMode, Examples) {
  const TwoModeCov e = extract_two_mode(epr_state(7));
  EXPECT_NEAR(static_cast<double>(e.a), 7, 1e-15);
  EXPECT_NEAR(static_cast<double>(e.b), 7, 1e-15);
  EXPECT_NEAR(static_cast<double>(e.c), std::sqrt(48.0), 1e-14);

  ProtocolParams p;
  p.eps1 = p.eps2 = 0;
  const MdiCircuit circuit(p);
  EXPECT_EQ(extract_two_mode(circuit.alice_bob(0)).c, 0);
}

TEST(ExtractTwoMode, RejectsBrokenStructure) {
  Matrix m = epr_state(3).cov();
  m(1, 1) += 0.5;
  EXPECT_THROW(extract_two_mode(GaussianState(m)), StructuralError);
}

TEST(MdiCircuit, RelayMatchesGlobalOracle) {
  const ProtocolParams p = ten_km_practical();
  const MdiCircuit circuit(p);
  const oracle::Pipeline pipeline(p);
  for (Real g : {0.0L, 0.7L, 1.4142L, 3.0L}) {
    const Matrix lib = circuit.alice_bob(g).cov();
    const Matrix ref = oracle::to_real(pipeline.alice_bob(oracle::Mp(g)));
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) {
        EXPECT_NEAR(static_cast<double>(lib(i, j) / 1e5L),
                    static_cast<double>(ref(i, j) / 1e5L), 1e-17)
            << "g = " << static_cast<double>(g) << " entry " << i << j;
      }
    }
  }
}

TEST(MdiCircuit, LosslessLineKeepsExcessNoise) {
  // At L = 0 the channel is the T -> 1 limit of the cloner: no loss, but the
  // input-referred excess noise is still added.
  ProtocolParams p;
  p.v_a = p.v_b = 5;
  p.l_bc = 0;
  p.l_ac = 0;
  p.eps1 = 0;
  p.eps2 = 0.01;
  ProtocolParams near = p;
  near.l_bc = 1e-7;
  const TwoModeCov at_zero = extract_two_mode(MdiCircuit(p).alice_bob(1));
  const TwoModeCov limit = extract_two_mode(MdiCircuit(near).alice_bob(1));
  EXPECT_NEAR(static_cast<double>(at_zero.b), static_cast<double>(limit.b), 1e-6);
  EXPECT_GT(at_zero.b, extract_two_mode([&] {
              ProtocolParams q = p;
              q.eps2 = 0;
              return MdiCircuit(q).alice_bob(1);
            }()).b);
}

TEST(MdiCircuit, RejectsInvalidParameters) {
  ProtocolParams p;
  p.l_ac = -1;
  EXPECT_THROW(MdiCircuit{p}, InvalidParameter);
  p = ProtocolParams{};
  p.v_a = 0.5;
  EXPECT_THROW(MdiCircuit{p}, InvalidParameter);
  p = ProtocolParams{};
  p.eta = 1;
  p.v_el = 0.01;
  EXPECT_THROW(MdiCircuit{p}, InvalidParameter);
}

}  // namespace
}  // namespace cvmdi
