#include "uls/reference.hpp"

#include <array>

namespace uls::reference {
namespace {

using citygen::Environment;
using citygen::Layout;

// Values copied verbatim, including their printed precision.
constexpr std::array<CoefficientRow, 12> kRows{{
    {Layout::RandomManhattan, Environment::Suburban, {3.44, 0.108}, {-9.31, 20.71, -16.64, 2.78}},
    {Layout::RandomManhattan, Environment::Urban, {6.55, 0.069}, {-4.933, 12.4, -12.83, 4.049}},
    {Layout::RandomManhattan, Environment::DenseUrban, {9.67, 0.064}, {-4.253, 11.13, -12.37, 4.827}},
    {Layout::RandomManhattan, Environment::HighRise, {19.8, 0.067}, {-13.16, 37.89, -37.91, 13.73}},
    {Layout::RandomUrban, Environment::Suburban, {2.96, 0.117}, {-16.54, 30.55, -19.85, 2.668}},
    {Layout::RandomUrban, Environment::Urban, {4.42, 0.056}, {-6.686, 16.24, -14.42, 3.726}},
    {Layout::RandomUrban, Environment::DenseUrban, {7.06, 0.056}, {-2.772, 8.748, -11.10, 4.276}},
    {Layout::RandomUrban, Environment::HighRise, {18.4, 0.071}, {-6.721, 18.93, -20.69, 8.675}},
    {Layout::RandomHighway, Environment::Suburban, {2.99, 0.124}, {-11.49, 23.93, -17.67, 2.468}},
    {Layout::RandomHighway, Environment::Urban, {4.72, 0.068}, {-7.536, 17.33, -15.02, 3.709}},
    {Layout::RandomHighway, Environment::DenseUrban, {5.30, 0.063}, {-5.589, 14.63, -14.35, 4.083}},
    {Layout::RandomHighway, Environment::HighRise, {9.24, 0.048}, {-7.308, 21.05, -21.34, 7.568}},
}};

}  // namespace

std::span<const CoefficientRow> published_rows() { return kRows; }

std::optional<CoefficientRow> find(citygen::Layout layout,
                                   citygen::Environment environment) {
  for (const auto& row : kRows) {
    if (row.layout == layout && row.environment == environment) return row;
  }
  return std::nullopt;
}

}  // namespace uls::reference
