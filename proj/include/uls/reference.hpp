#pragma once

#include <optional>
#include <span>

#include "uls/citygen.hpp"
#include "uls/fitting.hpp"

namespace uls::reference {

// Published S-curve coefficients for one (layout, environment) pair, each
// fitted to 200K simulated ABS-UE links. Mirrored in data/table2.csv.
struct CoefficientRow {
  citygen::Layout layout;
  citygen::Environment environment;
  fit::Sig1Params sig1;
  fit::Sig2Params sig2;
};

std::span<const CoefficientRow> published_rows();
std::optional<CoefficientRow> find(citygen::Layout layout,
                                   citygen::Environment environment);

}  // namespace uls::reference
