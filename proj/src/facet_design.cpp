#include "da2gc/facet_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "da2gc/errors.hpp"
#include "da2gc/units.hpp"

namespace da2gc {

int face_count(int rows, int columns) { return (rows / 2) * columns + rows % 2; }

double elevation_span_deg(double isd_km, double altitude_min_km) {
  return rad_to_deg(std::atan((isd_km / 2.0) / altitude_min_km));
}

SteeringLoss steering_loss(int rows, int columns, double elevation_span_deg,
                           double azimuth_half_span_deg) {
  if (rows < 1 || columns < 1) throw ConfigError("facet rows and columns must be >= 1");
  SteeringLoss out;
  out.faces = face_count(rows, columns);
  out.max_angle_deg = rows == 1 ? elevation_span_deg
                                : std::max(elevation_span_deg / rows, azimuth_half_span_deg / columns);
  if (out.max_angle_deg >= 90.0) {
    out.unbounded = true;
    out.zeta_bits = std::numeric_limits<double>::infinity();
    out.total_bits = std::numeric_limits<double>::infinity();
    return out;
  }
  const double c = std::cos(deg_to_rad(out.max_angle_deg));
  out.zeta_bits = -std::log2(c * c);
  out.total_bits = out.zeta_bits * out.faces;
  return out;
}

namespace {

FacetDesign make_design(int rows, int columns, double span, const SteeringLoss& loss) {
  FacetDesign d;
  d.rows = rows;
  d.columns = columns;
  d.faces = loss.faces;
  d.elevation_span_deg = span;
  d.azimuth_half_span_deg = 180.0;
  d.zeta_bits = loss.zeta_bits;
  d.total_bits = loss.total_bits;
  return d;
}

}  // namespace

FacetDesign optimize_facets(double isd_km, double altitude_min_km, FacetSearchBounds bounds) {
  if (isd_km <= 0.0 || altitude_min_km <= 0.0) throw ConfigError("ISD and h_min must be > 0");
  const double span = elevation_span_deg(isd_km, altitude_min_km);
  FacetDesign best;
  bool found = false;
  for (int n = 1; n <= bounds.max_rows; ++n) {
    for (int m = 2; m <= bounds.max_columns; ++m) {
      const auto loss = steering_loss(n, m, span);
      if (loss.unbounded) continue;
      const auto key = std::make_tuple(loss.total_bits, loss.faces, n, m);
      if (!found || key < std::make_tuple(best.total_bits, best.faces, best.rows, best.columns)) {
        best = make_design(n, m, span, loss);
        found = true;
      }
    }
  }
  if (!found) throw NumericalError("no bounded facet design in the search grid");
  return best;
}

FacetDesign eight_face_design(double isd_km, double altitude_min_km) {
  const double span = elevation_span_deg(isd_km, altitude_min_km);
  return make_design(3, 7, span, steering_loss(3, 7, span));
}

}  // namespace da2gc
