#include "trusslock/site_curves.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace trusslock {

CurveParams CurveParams::defaults_for(const Torus& t, int valence)
{
  CurveParams p;
  p.valence = valence;
  p.amplitude = 0.3 * t.side;
  p.weave = 0.08 * t.side;
  p.gap = 22.0 * kPi / 180.0;
  p.samples = 200;
  p.radial_offset = 0.0;
  return p;
}

double CurveParams::height(double param) const
{
  return amplitude * std::sin(0.5 * valence * param) + weave * std::sin(valence * param);
}

void CurveParams::validate(const Torus& t) const
{
  const double hs = t.half_side();
  if (valence < 1) throw InvariantError("curve valence must be >= 1");
  if (!(amplitude > 0.0)) throw InvariantError("curve amplitude must be > 0");
  if (!(amplitude + std::abs(weave) < hs))
    throw InvariantError("curve amplitude + |weave| must stay below s/2");
  if (!(std::abs(radial_offset) < hs)) throw InvariantError("|radial offset| must stay below s/2");
  if (!(gap > 0.0 && gap < kPi / valence)) throw InvariantError("curve gap must lie in (0, pi/n)");
  if (samples < 16) throw InvariantError("at least 16 samples per curve are required");
}

SiteCurve generate_base_curve(const CurveParams& params, const Torus& t)
{
  params.validate(t);
  const double T = params.half_extent();
  SiteCurve c;
  c.label = 0;
  c.points.reserve(std::size_t(params.samples));
  for (int i = 0; i < params.samples; ++i) {
    const double u = -T + 2.0 * T * double(i) / double(params.samples - 1);
    c.points.emplace_back(t.revolve_radius * u, params.radial_offset, params.height(u));
  }
  return c;
}

SiteCurve deform_to_torus(const SiteCurve& base, const Torus& t)
{
  SiteCurve out;
  out.label = base.label;
  out.points.reserve(base.points.size());
  // Angle 0 lies on +x for the default axis.
  const bool z_axis = (t.axis - Vec3::UnitZ()).norm() < 1e-12;
  const Vec3 ex = z_axis ? Vec3::UnitX() : Vec3(t.axis.unitOrthogonal());
  const Vec3 ey = t.axis.cross(ex);
  for (const auto& p : base.points) {
    const double theta = p.x() / t.revolve_radius;
    const double radius = t.revolve_radius + p.y();
    const Vec3 q = t.center + radius * (std::cos(theta) * ex + std::sin(theta) * ey) + p.z() * t.axis;
    const double margin = std::min(t.half_side() - std::abs(p.z()), t.half_side() - std::abs(p.y()));
    if (!(margin > 0.0) || !point_in_torus(q, t))
      throw GeometryError("deformed site curve leaves the torus interior");
    out.points.push_back(q);
  }
  return out;
}

std::vector<SiteCurve> replicate_rotated(const SiteCurve& curve0, int n, const Torus& t)
{
  if (n < 1) throw InvariantError("replicate_rotated needs n >= 1");
  std::vector<SiteCurve> curves;
  curves.reserve(std::size_t(n));
  for (int k = 0; k < n; ++k) {
    SiteCurve c;
    c.label = k;
    if (k == 0) {
      c.points = curve0.points;
    } else {
      const Eigen::Matrix3d rot = Eigen::AngleAxisd(2.0 * kPi * k / n, t.axis).toRotationMatrix();
      c.points.reserve(curve0.points.size());
      for (const auto& p : curve0.points) c.points.push_back(t.center + rot * (p - t.center));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<SiteCurve> make_site_curves(const CurveParams& params, const Torus& t)
{
  return replicate_rotated(deform_to_torus(generate_base_curve(params, t), t), params.valence, t);
}

double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1)
{
  // Closest points of two segments (clamped parametric solution).
  const Vec3 d1 = p1 - p0;
  const Vec3 d2 = q1 - q0;
  const Vec3 r = p0 - q0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double u = 0.0;
  if (a <= 0.0 && e <= 0.0) return r.norm();
  if (a <= 0.0) {
    u = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      u = (b * s + f) / e;
      if (u < 0.0) {
        u = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (u > 1.0) {
        u = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p0 + s * d1) - (q0 + u * d2)).norm();
}

double validate_separation(const std::vector<SiteCurve>& curves, double min_distance)
{
  if (curves.size() < 2) return std::numeric_limits<double>::infinity();
  const std::size_t m = curves.front().points.size();
  for (const auto& c : curves)
    if (c.points.size() != m || m < 2) throw InvariantError("curves must share a sample count >= 2");

  double best = std::numeric_limits<double>::infinity();
  int bk = -1;
  int bj = -1;
  for (std::size_t k = 0; k < curves.size(); ++k)
    for (std::size_t j = k + 1; j < curves.size(); ++j) {
      const auto& a = curves[k].points;
      const auto& b = curves[j].points;
      double pair_best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t l = 0; l + 1 < m; ++l)
          pair_best = std::min(pair_best, segment_distance(a[i], a[i + 1], b[l], b[l + 1]));
      if (pair_best < best) {
        best = pair_best;
        bk = curves[k].label;
        bj = curves[j].label;
      }
    }
  if (best < min_distance) {
    std::ostringstream msg;
    msg << "site curves " << bk << " and " << bj << " are " << best << " apart (minimum " << min_distance << ")";
    throw GeometryError(msg.str());
  }
  return best;
}

double rotational_closure_error(const std::vector<SiteCurve>& curves, const Torus& t)
{
  const int n = int(curves.size());
  if (n < 1) return 0.0;
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(2.0 * kPi / n, t.axis).toRotationMatrix();
  double err = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto& src = curves[std::size_t(k)].points;
    const auto& dst = curves[std::size_t((k + 1) % n)].points;
    for (std::size_t i = 0; i < src.size(); ++i)
      err = std::max(err, (t.center + rot * (src[i] - t.center) - dst[i]).norm());
  }
  return err;
}

void write_point_cloud(std::ostream& os, const std::vector<SiteCurve>& curves)
{
  char line[128];
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      std::snprintf(line, sizeof line, "%d %.17g %.17g %.17g\n", c.label, p.x(), p.y(), p.z());
      os << line;
    }
}

}  // namespace trusslock
