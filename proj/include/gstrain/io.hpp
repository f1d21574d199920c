#pragma once

#include <string>
#include <vector>

#include "gstrain/discount.hpp"
#include "gstrain/effective.hpp"
#include "gstrain/field.hpp"
#include "gstrain/frontsim.hpp"
#include "gstrain/strain.hpp"

namespace gstrain {

/// CSV/JSON/binary artifact writers. All numeric fields go through the
/// round-trip "%.17g" formatter, so byte-identical inputs give
/// byte-identical files.

std::string curve_csv(const StrainCurve& curve);
std::string field_csv(const FieldRealization& r, double x0, double x1, int samples);
std::string effective_csv(const std::vector<std::pair<double, double>>& p_h);
std::string ptables_csv(const EffectiveHamiltonian& eff);
std::string discount_csv(const DiscountEstimates& est);
std::string speed_series_csv(const SpeedEstimate& est);
std::string hsurface_csv(const StrainHamiltonian& h, double p_min, double p_max, int np,
                         double x_min, double x_max, int nx);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Final level-set field as a flat binary grid of doubles (row-major W, then
/// G = m x + n y + W) plus a small JSON header next to it.
void write_front_grid(const std::string& path_base, const FrontState& st);

}  // namespace gstrain
