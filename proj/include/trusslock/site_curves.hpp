#pragma once

#include "trusslock/domain.hpp"

#include <iosfwd>
#include <limits>
#include <vector>

namespace trusslock {

/// Shape of the sinusoidal Voronoi sites.
///
/// Curve 0 is parameterised by t in [-T, T], T = 2*pi/n - gap, with height
///   z(t) = amplitude * sin(n t / 2) + weave * sin(n t).
/// The first term makes neighbouring curves pass over/under each other on
/// their angular overlap. The second term cancels in the vertical gap between
/// neighbours but bends their shared interface into a full-period wave, which
/// is what stops a Connector from sliding out along the ring.
struct CurveParams
{
  int valence = 3;
  double amplitude = 0.3;
  double weave = 0.08;
  double gap = 22.0 * kPi / 180.0;
  int samples = 200;
  double radial_offset = 0.0;

  /// Defaults expressed relative to the cross-section side.
  static CurveParams defaults_for(const Torus& t, int valence = 3);

  double half_extent() const { return 2.0 * kPi / valence - gap; }
  double height(double param) const;
  void validate(const Torus& t) const;
};

struct SiteCurve
{
  int label = 0;
  std::vector<Vec3> points;
};

/// Straight-space curve: x = R t, y = radial offset, z = height(t), with m
/// uniform samples of t over [-T, T].
SiteCurve generate_base_curve(const CurveParams& params, const Torus& t);

/// Wraps x onto the toroidal angle (theta = x / R) at radius R + y.
/// Throws GeometryError if a point is not strictly inside the solid.
SiteCurve deform_to_torus(const SiteCurve& base, const Torus& t);

/// Curve k is curve0 rotated by 2*pi*k/n about the torus axis.
std::vector<SiteCurve> replicate_rotated(const SiteCurve& curve0, int n, const Torus& t);

/// generate -> deform -> replicate.
std::vector<SiteCurve> make_site_curves(const CurveParams& params, const Torus& t);

/// Minimum segment-to-segment distance between any two distinct polylines.
/// Returns +infinity for fewer than two curves; throws GeometryError naming
/// the closest pair if the distance is below `min_distance`.
double validate_separation(const std::vector<SiteCurve>& curves, double min_distance);

double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

/// Pointwise error of mapping curve k onto curve k+1 (mod n) by a rotation
/// of 2*pi/n about the torus axis.
double rotational_closure_error(const std::vector<SiteCurve>& curves, const Torus& t);

/// One "label x y z" line per sample.
void write_point_cloud(std::ostream& os, const std::vector<SiteCurve>& curves);

}  // namespace trusslock
