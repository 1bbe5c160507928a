/*!
  \file cost.hpp
  \brief Placement cost functions over Eigen vectors of cell x coordinates.

  Every net is a two-pin arc between a driver pin and a sink pin whose
  y distance is fixed by the row geometry. A pin either belongs to a
  movable cell (`cell >= 0`, position = x[cell] + offset) or is fixed at
  `offset`.
*/

#pragma once

#include <aqflow/placement.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace aqflow
{

template<typename Scalar>
using vector_x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct pin_term
{
  int cell{ -1 };
  double offset{ 0.0 };

  template<typename Scalar>
  Scalar position( vector_x<Scalar> const& x ) const
  {
    return cell >= 0 ? x[cell] + static_cast<Scalar>( offset ) : static_cast<Scalar>( offset );
  }
};

struct arc
{
  net_id net{ invalid_id };
  pin_term from;
  pin_term to;
  double dy{ 0.0 };
  /*! phase of the driving row; input pads drive from phase -1 */
  int phase{ 0 };
};

struct placement_model
{
  std::vector<arc> arcs;
  int cells{ 0 };
  double layer_width{ 0.0 };
};

/*! \brief Arcs of every driven-and-consumed net at the current pad positions. */
placement_model build_model( placement const& pl, netlist const& ntk );

/*! \brief Clock phase in 0..3, also for negative rows. */
inline int clock_phase( int phase )
{
  return ( ( phase % 4 ) + 4 ) % 4;
}

/*!
  \brief Smooth weighted-average extent max - min over a set of coordinates.

  The smooth max uses weights exp(x / gamma), the smooth min exp(-x / gamma);
  both are shifted by the true extreme for numerical stability. Writes the
  gradient into `grad` when given.
*/
template<typename Scalar>
Scalar wa_extent( vector_x<Scalar> const& v, Scalar gamma, vector_x<Scalar>* grad = nullptr )
{
  using std::exp;
  auto const n = v.size();
  if ( n == 0 )
  {
    if ( grad )
      grad->resize( 0 );
    return Scalar( 0 );
  }
  Scalar const hi = v.maxCoeff();
  Scalar const lo = v.minCoeff();
  vector_x<Scalar> ep( n ), em( n );
  for ( Eigen::Index i = 0; i < n; ++i )
  {
    ep[i] = exp( ( v[i] - hi ) / gamma );
    em[i] = exp( ( lo - v[i] ) / gamma );
  }
  Scalar const sp = ep.sum(), sm = em.sum();
  Scalar const wmax = v.dot( ep ) / sp;
  Scalar const wmin = v.dot( em ) / sm;
  if ( grad )
  {
    grad->resize( n );
    for ( Eigen::Index i = 0; i < n; ++i )
    {
      Scalar const dmax = ep[i] / sp * ( Scalar( 1 ) + ( v[i] - wmax ) / gamma );
      Scalar const dmin = em[i] / sm * ( Scalar( 1 ) - ( v[i] - wmin ) / gamma );
      ( *grad )[i] = dmax - dmin;
    }
  }
  return wmax - wmin;
}

template<typename Scalar>
struct timing_value
{
  Scalar cost{ 0 };
  Scalar d_start{ 0 };
  Scalar d_end{ 0 };
};

/*!
  \brief Four-phase timing cost of a net leaving a row of the given phase.

  Phase 0: (xe - xs)^a, phase 1: (xe + xs)^a, phase 2: (xs - xe)^a,
  phase 3: (2W - xe - xs)^a. The base is clamped at zero in every case.
*/
template<typename Scalar>
timing_value<Scalar> timing_cost( int phase, Scalar x_start, Scalar x_end, Scalar layer_width, Scalar alpha )
{
  using std::pow;
  Scalar base{ 0 };
  Scalar ds{ 0 }, de{ 0 };
  switch ( clock_phase( phase ) )
  {
  case 0: base = x_end - x_start; ds = -1; de = 1; break;
  case 1: base = x_end + x_start; ds = 1; de = 1; break;
  case 2: base = x_start - x_end; ds = 1; de = -1; break;
  default: base = Scalar( 2 ) * layer_width - x_end - x_start; ds = -1; de = -1; break;
  }
  timing_value<Scalar> r;
  if ( base <= Scalar( 0 ) )
  {
    return r;
  }
  r.cost = pow( base, alpha );
  Scalar const slope = alpha * pow( base, alpha - Scalar( 1 ) );
  r.d_start = slope * ds;
  r.d_end = slope * de;
  return r;
}

template<typename Scalar>
struct cost_gradient
{
  Scalar cost{ 0 };
  vector_x<Scalar> gradient;
};

namespace detail
{

template<typename Scalar>
void accumulate( vector_x<Scalar>& g, pin_term const& p, Scalar v )
{
  if ( p.cell >= 0 )
  {
    g[p.cell] += v;
  }
}

template<typename Scalar>
Scalar arc_wa( arc const& a, vector_x<Scalar> const& x, Scalar gamma, Scalar& d_from, Scalar& d_to )
{
  vector_x<Scalar> v( 2 ), g;
  v << a.from.position( x ), a.to.position( x );
  Scalar const w = wa_extent<Scalar>( v, gamma, &g );
  d_from = g[0];
  d_to = g[1];
  return w + std::abs( static_cast<Scalar>( a.dy ) );
}

} // namespace detail

/*! \brief Smooth x extent plus exact y extent, summed over arcs. */
template<typename Scalar>
cost_gradient<Scalar> wa_wirelength( placement_model const& m, vector_x<Scalar> const& x, Scalar gamma )
{
  cost_gradient<Scalar> r;
  r.gradient = vector_x<Scalar>::Zero( m.cells );
  for ( auto const& a : m.arcs )
  {
    Scalar df, dt;
    r.cost += detail::arc_wa( a, x, gamma, df, dt );
    detail::accumulate( r.gradient, a.from, df );
    detail::accumulate( r.gradient, a.to, dt );
  }
  return r;
}

struct objective_params
{
  double gamma{ 40.0 };
  double lambda_t{ 0.0 };
  double lambda_w{ 0.0 };
  double w_max{ 0.0 };
  double alpha{ 2.0 };

  static objective_params from_config( flow_config const& cfg )
  {
    return { cfg.effective_gamma(), cfg.lambda_t, cfg.lambda_w, cfg.planning_limit(), cfg.alpha };
  }
};

/*! \brief sum over arcs of W + lambda_t * T + lambda_w * max(0, W - W_max) with smooth W. */
template<typename Scalar>
cost_gradient<Scalar> total_objective( placement_model const& m, vector_x<Scalar> const& x, objective_params const& ps )
{
  cost_gradient<Scalar> r;
  r.gradient = vector_x<Scalar>::Zero( m.cells );
  Scalar const gamma( ps.gamma ), lt( ps.lambda_t ), lw( ps.lambda_w ), wmax( ps.w_max ), alpha( ps.alpha );
  Scalar const width( m.layer_width );
  for ( auto const& a : m.arcs )
  {
    Scalar df, dt;
    Scalar const w = detail::arc_wa( a, x, gamma, df, dt );
    auto const t = timing_cost<Scalar>( a.phase, a.from.position( x ), a.to.position( x ), width, alpha );
    Scalar cost = w + lt * t.cost;
    Scalar gf = df + lt * t.d_start;
    Scalar gt = dt + lt * t.d_end;
    if ( w > wmax )
    {
      cost += lw * ( w - wmax );
      gf += lw * df;
      gt += lw * dt;
    }
    r.cost += cost;
    detail::accumulate( r.gradient, a.from, gf );
    detail::accumulate( r.gradient, a.to, gt );
  }
  return r;
}

/*! \brief Cost of one arc with exact Manhattan length (the discrete objective). */
template<typename Scalar>
Scalar exact_arc_cost( arc const& a, Scalar xs, Scalar xe, Scalar layer_width, objective_params const& ps )
{
  using std::abs;
  Scalar const w = abs( xe - xs ) + abs( static_cast<Scalar>( a.dy ) );
  auto const t = timing_cost<Scalar>( a.phase, xs, xe, layer_width, static_cast<Scalar>( ps.alpha ) );
  Scalar cost = w + static_cast<Scalar>( ps.lambda_t ) * t.cost;
  if ( w > static_cast<Scalar>( ps.w_max ) )
  {
    cost += static_cast<Scalar>( ps.lambda_w ) * ( w - static_cast<Scalar>( ps.w_max ) );
  }
  return cost;
}

template<typename Scalar>
Scalar exact_objective( placement_model const& m, vector_x<Scalar> const& x, objective_params const& ps )
{
  Scalar total{ 0 };
  for ( auto const& a : m.arcs )
  {
    total += exact_arc_cost<Scalar>( a, a.from.position( x ), a.to.position( x ), static_cast<Scalar>( m.layer_width ), ps );
  }
  return total;
}

template<typename Scalar>
Scalar hpwl( placement_model const& m, vector_x<Scalar> const& x )
{
  using std::abs;
  Scalar total{ 0 };
  for ( auto const& a : m.arcs )
  {
    total += abs( a.to.position( x ) - a.from.position( x ) ) + abs( static_cast<Scalar>( a.dy ) );
  }
  return total;
}

/*! \brief x vector of a placement as doubles. */
vector_x<double> positions( placement const& pl );

struct timing_report
{
  std::vector<double> slack_ps;
  double budget_ps{ 0.0 };
  double worst_slack_ps{ 0.0 };
  /*! worst negative slack; empty when every slack is non-negative */
  std::optional<double> wns_ps;
};

/*! \brief Slack of every net for the given lengths; delay = d_gate + d_wire * length. */
timing_report analyze_timing( std::vector<double> const& lengths, flow_config const& cfg );

/*! \brief Same, with Manhattan pin distances of the placement. */
timing_report analyze_timing( placement const& pl, netlist const& ntk, flow_config const& cfg );

} // namespace aqflow
