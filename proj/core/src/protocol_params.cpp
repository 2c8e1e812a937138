#include "cvmdi/protocol_params.hpp"

#include <cmath>

#include "cvmdi/errors.hpp"
#include "cvmdi/mdi_circuit.hpp"

namespace cvmdi {
namespace {

void require(bool ok, const char* field, const std::string& rule) {
  if (!ok) throw InvalidParameter(std::string(field) + ": " + rule);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::Squeezed:
      return "squeezed";
    case Protocol::SqueezedModified:
      return "squeezed-modified";
    case Protocol::Coherent:
      return "coherent";
  }
  return "unknown";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
  if (name == "squeezed") return Protocol::Squeezed;
  if (name == "squeezed-modified") return Protocol::SqueezedModified;
  if (name == "coherent") return Protocol::Coherent;
  return std::nullopt;
}

Real ProtocolParams::t1() const { return channel_transmittance(l_ac, alpha); }
Real ProtocolParams::t2() const { return channel_transmittance(l_bc, alpha); }

void ProtocolParams::validate() const {
  require(finite(v_a) && v_a >= 1, "V_A", "must be >= 1");
  require(finite(v_b) && v_b >= 1, "V_B", "must be >= 1");
  require(finite(l_ac) && l_ac >= 0, "L_AC", "must be >= 0 km");
  require(finite(l_bc) && l_bc >= 0, "L_BC", "must be >= 0 km");
  require(finite(alpha) && alpha >= 0, "alpha", "must be >= 0 dB/km");
  require(finite(eps1) && eps1 >= 0, "eps1", "must be >= 0");
  require(finite(eps2) && eps2 >= 0, "eps2", "must be >= 0");
  require(finite(eta) && eta > 0 && eta <= 1, "eta", "must lie in (0, 1]");
  require(finite(v_el) && v_el >= 0, "v_el", "must be >= 0");
  require(eta < 1 || v_el == 0, "v_el",
          "must be 0 when eta = 1 (ancilla variance diverges)");
  require(finite(beta) && beta >= 0 && beta <= 1, "beta", "must lie in [0, 1]");
  if (gain) require(finite(*gain) && *gain >= 0, "gain", "must be >= 0");
}

Real AddedNoiseParams::chi_n() const {
  return (1 - static_cast<Real>(t_r)) * n_r / t_r;
}

void AddedNoiseParams::validate() const {
  require(finite(t_r) && t_r > 0 && t_r <= 1, "T_R", "must lie in (0, 1]");
  require(finite(n_r) && n_r >= 1, "N_R", "must be >= 1");
}

AddedNoiseParams AddedNoiseParams::from_chi_n(double chi_n) {
  require(finite(chi_n) && chi_n >= 0, "chi_N", "must be >= 0");
  if (chi_n >= 1) return {0.5, chi_n};
  return {1.0 / (1.0 + chi_n), 1.0};
}

}  // namespace cvmdi
