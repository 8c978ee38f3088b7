#pragma once

#include <vector>

#include "microplan/types.hpp"

namespace microplan {

/// Net present value of a plan with the given yearly dispatch: distribution
/// capex from year-over-year line/corridor deltas, generation capex from
/// generator deltas, operating cost from commitment and produced energy,
/// everything discounted at the case's rate. Year-0 stock is empty.
MoneyBreakdown npv(const NetworkCase& c, const InvestmentPlan& plan,
                   const OperationalState& dispatch);

/// Same, averaging operating cost over equiprobable per-scenario dispatches.
MoneyBreakdown npv_over_scenarios(const NetworkCase& c, const InvestmentPlan& plan,
                                  const std::vector<OperationalState>& dispatches);

}  // namespace microplan
