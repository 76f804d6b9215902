#pragma once

#include "hdlp/data.hpp"

#include <cstdint>

namespace hdlp {

/// Monthly macro panel with a recursive factor structure: `slow` series
/// react to the policy rate with a lag, `fast` ones within the month. The
/// rate sits at the lower bound for `zlb_length` months starting at row
/// `zlb_start`. Columns: IP, CPI, the other slow series, FFR, the fast
/// series and the indicator ZLB (1 when FFR <= 0.25), with transform codes
/// and speed classes filled in.
struct MacroPanelConfig {
  Index T = 707;
  int slow = 67;
  int fast = 54;
  Index zlb_start = 590;
  Index zlb_length = 85;
  std::uint64_t seed = 1960;
};

Dataset synthetic_macro_panel(const MacroPanelConfig& config = {});

/// Quarterly fiscal panel: news shock, government spending, GDP, taxes,
/// unemployment and the indicators HIGH_U (unemployment above 6.5) and REC.
/// Spending and GDP respond more strongly to news in the high state.
struct FiscalPanelConfig {
  Index T = 508;
  std::uint64_t seed = 1889;
};

Dataset synthetic_fiscal_panel(const FiscalPanelConfig& config = {});

/// Three-variable VAR(1) sample (output, prices, rate) for smoke tests.
Dataset toy_panel(Index T = 200, std::uint64_t seed = 7);

}  // namespace hdlp
