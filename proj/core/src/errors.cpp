#include "ckn/errors.hpp"

namespace ckn {

std::string_view reason_code(DomainReason reason) noexcept {
  switch (reason) {
    case DomainReason::kDimensionTooSmall: return "n_lt_2";
    case DomainReason::kPNotAboveOne: return "p_le_1";
    case DomainReason::kQNotAboveP: return "q_le_p";
    case DomainReason::kQNotBelowCritical: return "q_ge_pstar";
    case DomainReason::kWeightNotAboveHardy: return "a_le_p_minus_n";
    case DomainReason::kNonFinite: return "non_finite";
    case DomainReason::kNonPositiveArgument: return "nonpositive_argument";
    case DomainReason::kPhiWindow: return "phi_window";
    case DomainReason::kBetaWindow: return "beta_window";
    case DomainReason::kInvalidGrid: return "invalid_grid";
    case DomainReason::kInvalidQuadratureSpec: return "invalid_quadrature_spec";
    case DomainReason::kInvalidScanJob: return "invalid_scan_job";
  }
  return "unknown";
}

DomainError::DomainError(DomainReason reason, const std::string& detail)
    : Error(std::string(reason_code(reason)) + ": " + detail), reason_(reason) {}

}  // namespace ckn
