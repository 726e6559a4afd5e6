#pragma once

namespace da2gc {

/// floor(n/2) * m + (n mod 2): faces of an n-row, m-column multifaceted array.
int face_count(int rows, int columns);

/// Elevation span atan(r_max / h_min) in degrees with r_max = ISD / 2.
double elevation_span_deg(double isd_km, double altitude_min_km);

struct SteeringLoss {
  double max_angle_deg = 0.0;
  double zeta_bits = 0.0;   // worst-case loss per array, -log2(cos^2(max angle))
  double total_bits = 0.0;  // zeta * faces
  int faces = 0;
  bool unbounded = false;   // max angle reached 90 degrees
};

/// Worst-case beamsteering rate loss. A single row (n = 1) is one horizontal
/// face, so only the elevation span contributes to its off-normal angle.
SteeringLoss steering_loss(int rows, int columns, double elevation_span_deg,
                           double azimuth_half_span_deg = 180.0);

struct FacetDesign {
  int rows = 0;     // n, scanning elevation
  int columns = 0;  // m, scanning azimuth
  int faces = 0;
  double elevation_span_deg = 0.0;
  double azimuth_half_span_deg = 180.0;
  double zeta_bits = 0.0;
  double total_bits = 0.0;
};

struct FacetSearchBounds {
  int max_rows = 10;
  int max_columns = 24;
};

/// Exhaustive minimization of the total worst-case loss over 1 <= n <= max_rows,
/// 2 <= m <= max_columns. Ties go to fewer faces, then fewer rows, then fewer columns.
FacetDesign optimize_facets(double isd_km, double altitude_min_km, FacetSearchBounds bounds = {});

/// The fixed n = 3, m = 7 (8-face) structure evaluated at the given ISD.
FacetDesign eight_face_design(double isd_km, double altitude_min_km);

}  // namespace da2gc
