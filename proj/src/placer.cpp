#include <aqflow/placer.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace aqflow
{

/* geometry */

micron placement::track_top( int t ) const
{
  micron y = 0;
  for ( int s = 0; s < t; ++s )
  {
    y += row_height.at( s ) + channel_gap.at( s );
  }
  return y;
}

point placement::cell_origin( netlist const& ntk, gate_id g ) const
{
  int const t = track_of_phase( ntk.gates[g].phase );
  return { x[g], track_bottom( t ) - height( g ) };
}

placement make_placement( netlist const& ntk, cell_library const& lib, flow_config const& cfg )
{
  placement pl;
  pl.grid_step = cfg.grid_step;
  pl.depth = ntk.depth();
  pl.x.assign( ntk.gates.size(), 0 );
  pl.row_height.assign( pl.tracks(), 0 );
  pl.channel_gap.assign( pl.tracks() - 1, cfg.channel_gap );
  for ( auto const& g : ntk.gates )
  {
    if ( g.phase < 0 )
    {
      throw aqflow_error( "gate g" + std::to_string( g.id ) + " has no phase" );
    }
    pl.kinds.push_back( lib.at( g.cell() ) );
    auto& h = pl.row_height[placement::track_of_phase( g.phase )];
    h = std::max( h, pl.kinds.back().height );
  }
  pl.input_x.assign( ntk.inputs.size(), 0 );
  pl.output_x.assign( ntk.outputs.size(), 0 );
  return pl;
}

namespace
{

std::size_t port_index( std::vector<io_port> const& ports, net_id n )
{
  for ( std::size_t i = 0; i < ports.size(); ++i )
  {
    if ( ports[i].net == n )
    {
      return i;
    }
  }
  throw aqflow_error( "net " + std::to_string( n ) + " is not a port" );
}

} // namespace

point driver_pin( placement const& pl, netlist const& ntk, net_id n )
{
  auto const& nt = ntk.nets.at( n );
  if ( !nt.driver )
  {
    return { pl.input_x.at( port_index( ntk.inputs, n ) ), pl.track_bottom( 0 ) };
  }
  auto const g = nt.driver->gate;
  auto const o = pl.cell_origin( ntk, g );
  auto const pin = pl.kinds[g].output_pin( static_cast<int>( nt.driver->pin ) );
  return { o.x + pin.dx, o.y + pin.dy };
}

point sink_pin( placement const& pl, netlist const& ntk, net_id n )
{
  auto const& nt = ntk.nets.at( n );
  if ( !nt.sinks.empty() )
  {
    auto const& s = nt.sinks.front();
    auto const o = pl.cell_origin( ntk, s.gate );
    auto const pin = pl.kinds[s.gate].input_pin( static_cast<int>( s.pin ) );
    return { o.x + pin.dx, o.y + pin.dy };
  }
  return { pl.output_x.at( port_index( ntk.outputs, n ) ), pl.track_top( pl.tracks() - 1 ) };
}

int net_track( netlist const& ntk, net_id n )
{
  return placement::track_of_phase( ntk.driver_phase( n ) );
}

void spread_pads( placement& pl )
{
  auto const spread = [&]( std::vector<micron>& xs ) {
    auto const n = static_cast<micron>( xs.size() );
    auto const cols = pl.layer_width / pl.grid_step;
    for ( micron i = 0; i < n; ++i )
    {
      /* grid * floor((i + 0.5) * cols / n) in integer arithmetic */
      xs[i] = pl.grid_step * ( ( 2 * i + 1 ) * cols / ( 2 * n ) );
    }
  };
  spread( pl.input_x );
  spread( pl.output_x );
}

std::vector<std::vector<gate_id>> rows_by_x( placement const& pl, netlist const& ntk )
{
  std::vector<std::vector<gate_id>> rows( static_cast<std::size_t>( std::max( pl.depth, 0 ) ) );
  for ( auto const& g : ntk.gates )
  {
    rows.at( g.phase ).push_back( g.id );
  }
  for ( auto& r : rows )
  {
    std::sort( r.begin(), r.end(), [&]( gate_id a, gate_id b ) { return std::pair{ pl.x[a], a } < std::pair{ pl.x[b], b }; } );
  }
  return rows;
}

namespace
{

bool has_arc( netlist const&, net const& n )
{
  return !n.sinks.empty() || n.primary_output;
}

} // namespace

micron hpwl( placement const& pl, netlist const& ntk )
{
  micron total = 0;
  for ( auto const& n : ntk.nets )
  {
    if ( !has_arc( ntk, n ) )
      continue;
    auto const a = driver_pin( pl, ntk, n.id );
    auto const b = sink_pin( pl, ntk, n.id );
    total += std::abs( a.x - b.x ) + std::abs( a.y - b.y );
  }
  return total;
}

micron max_net_length( placement const& pl, netlist const& ntk )
{
  micron worst = 0;
  for ( auto const& n : ntk.nets )
  {
    if ( !has_arc( ntk, n ) )
      continue;
    auto const a = driver_pin( pl, ntk, n.id );
    auto const b = sink_pin( pl, ntk, n.id );
    worst = std::max( worst, std::abs( a.x - b.x ) + std::abs( a.y - b.y ) );
  }
  return worst;
}

placement_model build_model( placement const& pl, netlist const& ntk )
{
  placement_model m;
  m.cells = static_cast<int>( ntk.gates.size() );
  m.layer_width = static_cast<double>( pl.layer_width );
  for ( auto const& n : ntk.nets )
  {
    if ( !has_arc( ntk, n ) )
      continue;
    arc a;
    a.net = n.id;
    auto const from = driver_pin( pl, ntk, n.id );
    auto const to = sink_pin( pl, ntk, n.id );
    if ( n.driver )
    {
      a.from = { static_cast<int>( n.driver->gate ), static_cast<double>( from.x - pl.x[n.driver->gate] ) };
    }
    else
    {
      a.from = { -1, static_cast<double>( from.x ) };
    }
    if ( !n.sinks.empty() )
    {
      auto const g = n.sinks.front().gate;
      a.to = { static_cast<int>( g ), static_cast<double>( to.x - pl.x[g] ) };
    }
    else
    {
      a.to = { -1, static_cast<double>( to.x ) };
    }
    a.dy = static_cast<double>( to.y - from.y );
    a.phase = ntk.driver_phase( n.id );
    m.arcs.push_back( a );
  }
  return m;
}

vector_x<double> positions( placement const& pl )
{
  vector_x<double> v( static_cast<Eigen::Index>( pl.x.size() ) );
  for ( std::size_t i = 0; i < pl.x.size(); ++i )
  {
    v[static_cast<Eigen::Index>( i )] = static_cast<double>( pl.x[i] );
  }
  return v;
}

timing_report analyze_timing( std::vector<double> const& lengths, flow_config const& cfg )
{
  timing_report r;
  r.budget_ps = cfg.phase_budget_ps();
  r.worst_slack_ps = lengths.empty() ? r.budget_ps : std::numeric_limits<double>::infinity();
  for ( auto const l : lengths )
  {
    double const slack = r.budget_ps - ( cfg.d_gate_ps + cfg.d_wire_ps_per_um * l );
    r.slack_ps.push_back( slack );
    r.worst_slack_ps = std::min( r.worst_slack_ps, slack );
  }
  if ( r.worst_slack_ps < 0.0 )
  {
    r.wns_ps = r.worst_slack_ps;
  }
  return r;
}

timing_report analyze_timing( placement const& pl, netlist const& ntk, flow_config const& cfg )
{
  std::vector<double> lengths;
  for ( auto const& n : ntk.nets )
  {
    if ( !has_arc( ntk, n ) )
      continue;
    auto const a = driver_pin( pl, ntk, n.id );
    auto const b = sink_pin( pl, ntk, n.id );
    lengths.push_back( static_cast<double>( std::abs( a.x - b.x ) + std::abs( a.y - b.y ) ) );
  }
  return analyze_timing( lengths, cfg );
}

/* global placement */

namespace
{

std::vector<std::vector<gate_id>> rows_by_id( netlist const& ntk, int depth )
{
  std::vector<std::vector<gate_id>> rows( static_cast<std::size_t>( std::max( depth, 0 ) ) );
  for ( auto const& g : ntk.gates )
  {
    rows.at( g.phase ).push_back( g.id );
  }
  return rows;
}

micron initial_width( placement const& pl, std::vector<std::vector<gate_id>> const& rows, micron grid )
{
  micron widest = 0;
  for ( auto const& r : rows )
  {
    micron sum = 0;
    for ( auto const g : r )
    {
      sum += pl.width( g );
    }
    widest = std::max( widest, sum );
  }
  auto const padded = static_cast<micron>( std::ceil( static_cast<double>( widest ) * 1.2 ) );
  return std::max( round_up_to_grid( padded, grid ), grid );
}

} // namespace

placement global_place( netlist const& ntk, cell_library const& lib, flow_config const& cfg, global_place_stats* stats )
{
  auto pl = make_placement( ntk, lib, cfg );
  auto const rows = rows_by_id( ntk, pl.depth );
  micron const w0 = initial_width( pl, rows, cfg.grid_step );
  pl.layer_width = w0;
  spread_pads( pl );

  for ( auto const& r : rows )
  {
    auto const m = static_cast<double>( r.size() );
    for ( std::size_t i = 0; i < r.size(); ++i )
    {
      auto const w = pl.width( r[i] );
      double const center = ( static_cast<double>( i ) + 0.5 ) * static_cast<double>( w0 ) / m;
      pl.x[r[i]] = std::clamp( snap_to_grid( center - static_cast<double>( w ) / 2.0, cfg.grid_step ), micron{ 0 }, std::max( w0 - w, micron{ 0 } ) );
    }
  }

  global_place_stats st;
  st.initial_width = w0;
  auto const model = build_model( pl, ntk );
  vector_x<double> x = positions( pl );
  vector_x<double> upper( x.size() );
  for ( Eigen::Index i = 0; i < x.size(); ++i )
  {
    upper[i] = static_cast<double>( std::max( w0 - pl.width( static_cast<gate_id>( i ) ), micron{ 0 } ) );
  }

  auto ps = objective_params::from_config( cfg );
  double step = static_cast<double>( cfg.grid_step ) / 2.0;
  constexpr double beta = 0.9;
  vector_x<double> velocity = vector_x<double>::Zero( x.size() );
  vector_x<double> best_x = x;
  double best = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  int increases = 0;

  for ( int it = 0; it < cfg.global_iterations && x.size() > 0; ++it )
  {
    if ( it > 0 && it % 50 == 0 )
    {
      ps.gamma *= 0.7;
      /* the objective changes with gamma; restart the bookkeeping */
      x = best_x;
      best = std::numeric_limits<double>::infinity();
      previous = std::numeric_limits<double>::infinity();
      velocity.setZero();
    }
    auto const r = total_objective<double>( model, x, ps );
    st.trace.push_back( { it, r.cost, ps.gamma, step, hpwl<double>( model, x ) } );
    if ( r.cost < best - 1e-9 )
    {
      best = r.cost;
      best_x = x;
      stagnant = 0;
    }
    else if ( ++stagnant >= 10 )
    {
      step /= 2.0;
      stagnant = 0;
    }
    increases = r.cost > previous ? increases + 1 : 0;
    if ( increases >= 50 )
    {
      throw divergence_error( "global placement diverged at iteration " + std::to_string( it ) + " (objective " + std::to_string( r.cost ) + ")" );
    }
    previous = r.cost;

    double const norm = r.gradient.lpNorm<Eigen::Infinity>();
    if ( norm == 0.0 )
    {
      break;
    }
    velocity = beta * velocity + r.gradient / norm;
    x -= step * velocity;
    x = x.cwiseMax( 0.0 ).cwiseMin( upper );
  }
  st.final_objective = best;

  for ( Eigen::Index i = 0; i < best_x.size(); ++i )
  {
    pl.x[static_cast<std::size_t>( i )] = snap_to_grid( best_x[i], cfg.grid_step );
  }
  if ( stats )
  {
    *stats = std::move( st );
  }
  return pl;
}

placement random_place( netlist const& ntk, cell_library const& lib, flow_config const& cfg, std::uint64_t seed )
{
  auto pl = make_placement( ntk, lib, cfg );
  auto const rows = rows_by_id( ntk, pl.depth );
  micron const w0 = initial_width( pl, rows, cfg.grid_step );
  pl.layer_width = w0;
  spread_pads( pl );
  std::mt19937_64 rng( seed );
  for ( auto const& g : ntk.gates )
  {
    auto const slots = std::max<micron>( ( w0 - pl.width( g.id ) ) / cfg.grid_step + 1, 1 );
    pl.x[g.id] = static_cast<micron>( bounded_draw( rng, static_cast<std::uint64_t>( slots ) ) ) * cfg.grid_step;
  }
  return legalize( pl, ntk, cfg );
}

/* legalization */

placement legalize( placement const& pl, netlist const& ntk, flow_config const& cfg, legalize_stats* stats )
{
  placement out = pl;
  legalize_stats st;
  auto const s = cfg.s_min;
  auto const width = pl.layer_width;
  micron right_most = 0;

  for ( auto const& row : rows_by_x( pl, ntk ) )
  {
    micron remaining = 0;
    for ( auto const g : row )
    {
      remaining += pl.width( g );
    }
    std::optional<micron> prev_right;
    for ( auto const g : row )
    {
      auto const w = pl.width( g );
      remaining -= w;
      auto const desired = snap_to_grid( static_cast<double>( pl.x[g] ), cfg.grid_step );
      auto const hi = width - w - remaining;
      micron pos;
      if ( !prev_right )
      {
        pos = std::max<micron>( desired, 0 );
        if ( pos > hi )
          pos = std::max<micron>( hi, 0 );
      }
      else
      {
        auto const abut = *prev_right;
        auto const gap = abut + s;
        if ( desired <= abut )
          pos = abut;
        else if ( desired < gap )
          pos = ( desired - abut <= gap - desired ) ? abut : gap;
        else
          pos = desired;
        if ( pos > hi )
          pos = hi >= gap ? hi : abut;
      }
      if ( pos + w + remaining > width )
      {
        st.grew = true;
      }
      st.displacement += std::abs( pos - pl.x[g] );
      out.x[g] = pos;
      prev_right = pos + w;
      right_most = std::max( right_most, pos + w );
    }
  }
  out.layer_width = std::max( round_up_to_grid( right_most, cfg.grid_step ), cfg.grid_step );
  out.overflow = pl.overflow || st.grew;
  spread_pads( out );
  if ( stats )
  {
    *stats = st;
  }
  return out;
}

std::vector<std::string> legality_errors( placement const& pl, netlist const& ntk, flow_config const& cfg )
{
  std::vector<std::string> errors;
  for ( auto const& row : rows_by_x( pl, ntk ) )
  {
    for ( std::size_t i = 0; i < row.size(); ++i )
    {
      auto const g = row[i];
      if ( pl.x[g] < 0 || pl.x[g] + pl.width( g ) > pl.layer_width )
        errors.push_back( "gate g" + std::to_string( g ) + " leaves the row" );
      if ( pl.x[g] % cfg.grid_step != 0 )
        errors.push_back( "gate g" + std::to_string( g ) + " is off grid" );
      if ( i > 0 && !spacing_ok( pl.x[row[i - 1]] + pl.width( row[i - 1] ), pl.x[g], cfg.s_min ) )
        errors.push_back( "gates g" + std::to_string( row[i - 1] ) + " and g" + std::to_string( g ) + " violate spacing" );
    }
  }
  return errors;
}

/* detailed placement */

detailed_params detailed_defaults( flow_config const& cfg )
{
  detailed_params ps;
  ps.window = cfg.window_size;
  ps.passes = cfg.detailed_passes;
  return ps;
}

std::optional<window_solution> solve_window( std::vector<micron> const& widths, micron lo, micron hi, std::optional<micron> left_edge,
                                             std::optional<micron> right_edge, micron grid, micron s_min,
                                             std::function<double( std::size_t, micron )> const& cost )
{
  if ( widths.empty() )
  {
    return window_solution{};
  }
  lo = round_up_to_grid( lo, grid );
  std::vector<micron> pos;
  for ( micron p = lo; p <= hi; p += grid )
  {
    pos.push_back( p );
  }
  auto const n = widths.size();
  auto const P = pos.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dp( n, std::vector<double>( P, inf ) );
  std::vector<std::vector<std::size_t>> from( n, std::vector<std::size_t>( P, 0 ) );

  auto const fits = [&]( std::size_t i, std::size_t p ) { return pos[p] + widths[i] <= hi; };
  for ( std::size_t p = 0; p < P; ++p )
  {
    if ( !fits( 0, p ) || ( left_edge && !spacing_ok( *left_edge, pos[p], s_min ) ) )
      continue;
    dp[0][p] = cost( 0, pos[p] );
  }
  for ( std::size_t i = 1; i < n; ++i )
  {
    for ( std::size_t p = 0; p < P; ++p )
    {
      if ( !fits( i, p ) )
        continue;
      double best = inf;
      std::size_t arg = 0;
      for ( std::size_t q = 0; q < P && pos[q] + widths[i - 1] <= pos[p]; ++q )
      {
        if ( dp[i - 1][q] < best && spacing_ok( pos[q] + widths[i - 1], pos[p], s_min ) )
        {
          best = dp[i - 1][q];
          arg = q;
        }
      }
      if ( best < inf )
      {
        dp[i][p] = best + cost( i, pos[p] );
        from[i][p] = arg;
      }
    }
  }
  double best = inf;
  std::size_t arg = 0;
  for ( std::size_t p = 0; p < P; ++p )
  {
    if ( dp[n - 1][p] < best && ( !right_edge || spacing_ok( pos[p] + widths[n - 1], *right_edge, s_min ) ) )
    {
      best = dp[n - 1][p];
      arg = p;
    }
  }
  if ( best == inf )
  {
    return std::nullopt;
  }
  window_solution sol;
  sol.cost = best;
  sol.x.resize( n );
  for ( std::size_t i = n; i-- > 0; )
  {
    sol.x[i] = pos[arg];
    arg = from[i][arg];
  }
  return sol;
}

placement detailed_place( placement const& pl, netlist const& ntk, flow_config const& cfg, detailed_params const& ps, detailed_stats* stats )
{
  placement out = pl;
  detailed_stats st;
  auto const model = build_model( out, ntk );
  auto const params = objective_params::from_config( cfg );
  auto const width = static_cast<double>( out.layer_width );

  /* arcs incident to each cell; the other end never lies in the same row */
  std::vector<std::vector<std::size_t>> incident( ntk.gates.size() );
  for ( std::size_t i = 0; i < model.arcs.size(); ++i )
  {
    auto const& a = model.arcs[i];
    if ( a.from.cell >= 0 )
      incident[a.from.cell].push_back( i );
    if ( a.to.cell >= 0 )
      incident[a.to.cell].push_back( i );
  }
  auto const cell_cost = [&]( gate_id g, micron xg ) {
    double c = 0.0;
    for ( auto const i : incident[g] )
    {
      auto const& a = model.arcs[i];
      auto const end = [&]( pin_term const& t ) {
        if ( t.cell < 0 )
          return t.offset;
        return static_cast<double>( static_cast<gate_id>( t.cell ) == g ? xg : out.x[t.cell] ) + t.offset;
      };
      c += exact_arc_cost<double>( a, end( a.from ), end( a.to ), width, params );
    }
    return c;
  };

  double total = exact_objective<double>( model, positions( out ), params );
  st.cost_trace.push_back( total );

  auto rows = rows_by_x( out, ntk );
  std::vector<bool> active( rows.size(), ps.rows.empty() );
  for ( auto const r : ps.rows )
  {
    if ( r >= 0 && static_cast<std::size_t>( r ) < rows.size() )
      active[r] = true;
  }
  auto const k = static_cast<std::size_t>( std::max( ps.window, 1 ) );

  for ( int pass = 0; pass < ps.passes; ++pass )
  {
    bool improved = false;
    for ( std::size_t r = 0; r < rows.size(); ++r )
    {
      auto& row = rows[r];
      if ( !active[r] || row.size() < 2 )
        continue;
      auto const wk = std::min( k, row.size() );
      for ( std::size_t start = 0; start + wk <= row.size(); ++start )
      {
        ++st.windows;
        std::vector<gate_id> win( row.begin() + static_cast<std::ptrdiff_t>( start ), row.begin() + static_cast<std::ptrdiff_t>( start + wk ) );
        auto const last = win.back();
        micron const span_left = out.x[win.front()];
        micron const span_right = out.x[last] + out.width( last );
        micron const lo = std::max<micron>( span_left - cfg.grid_step, 0 );
        micron const hi = std::min<micron>( span_right + cfg.grid_step, out.layer_width );
        std::optional<micron> left_edge, right_edge;
        if ( start > 0 )
          left_edge = out.x[row[start - 1]] + out.width( row[start - 1] );
        if ( start + wk < row.size() )
          right_edge = out.x[row[start + wk]];

        double current = 0.0;
        for ( auto const g : win )
          current += cell_cost( g, out.x[g] );

        std::vector<std::size_t> perm( wk );
        std::iota( perm.begin(), perm.end(), 0 );
        double best = current;
        std::vector<gate_id> best_order;
        std::vector<micron> best_x;
        do
        {
          std::vector<micron> widths;
          bool allowed = true;
          for ( std::size_t i = 0; i < wk; ++i )
          {
            widths.push_back( out.width( win[perm[i]] ) );
            if ( ps.same_size_only && widths.back() != out.width( win[i] ) )
              allowed = false;
          }
          if ( !allowed )
            continue;
          auto const sol = solve_window( widths, lo, hi, left_edge, right_edge, cfg.grid_step, cfg.s_min,
                                         [&]( std::size_t i, micron xi ) { return cell_cost( win[perm[i]], xi ); } );
          if ( sol && sol->cost < best - 1e-9 )
          {
            best = sol->cost;
            best_order.clear();
            for ( auto const p : perm )
              best_order.push_back( win[p] );
            best_x = sol->x;
          }
        } while ( std::next_permutation( perm.begin(), perm.end() ) );

        if ( !best_order.empty() )
        {
          for ( std::size_t i = 0; i < wk; ++i )
          {
            out.x[best_order[i]] = best_x[i];
            row[start + i] = best_order[i];
          }
          total += best - current;
          st.cost_trace.push_back( total );
          ++st.accepted;
          improved = true;
        }
      }
    }
    if ( !improved )
      break;
  }
  if ( stats )
  {
    *stats = std::move( st );
  }
  return out;
}

/* buffer rows */

micron reserve_channel_heights( placement& pl, netlist const& ntk, flow_config const& cfg )
{
  std::vector<std::vector<std::pair<micron, int>>> events( pl.channel_gap.size() );
  for ( auto const& n : ntk.nets )
  {
    if ( n.sinks.empty() && !n.primary_output )
      continue;
    auto const a = driver_pin( pl, ntk, n.id ).x;
    auto const b = sink_pin( pl, ntk, n.id ).x;
    if ( a == b )
      continue;
    auto& ev = events[static_cast<std::size_t>( net_track( ntk, n.id ) )];
    ev.emplace_back( std::min( a, b ), 1 );
    ev.emplace_back( std::max( a, b ) + 1, -1 );
  }
  micron const pitch = std::max( cfg.s_min, pl.grid_step );
  micron added = 0;
  for ( std::size_t t = 0; t < events.size(); ++t )
  {
    std::sort( events[t].begin(), events[t].end() );
    int depth = 0, density = 0;
    for ( auto const& [x, d] : events[t] )
      density = std::max( density, depth += d );
    if ( density == 0 )
      continue;
    auto const want = round_up_to_grid( ( density + 1 ) * pitch, pl.grid_step );
    if ( want > pl.channel_gap[t] )
    {
      added += want - pl.channel_gap[t];
      pl.channel_gap[t] = want;
    }
  }
  return added;
}

void insert_buffer_rows( placement& pl, netlist& ntk, cell_library const& lib, flow_config const& cfg, buffer_row_stats* stats,
                         std::vector<double> const* lengths )
{
  buffer_row_stats st;
  auto const& buf = lib.at( "BUF" );
  for ( int iter = 0; iter < cfg.max_buffer_row_iterations; ++iter )
  {
    reserve_channel_heights( pl, ntk, cfg );
    std::vector<micron> need( static_cast<std::size_t>( pl.tracks() - 1 ), 0 );
    bool any = false;
    for ( auto const& n : ntk.nets )
    {
      if ( n.sinks.empty() && !n.primary_output )
        continue;
      auto const a = driver_pin( pl, ntk, n.id );
      auto const b = sink_pin( pl, ntk, n.id );
      auto const dy = std::abs( b.y - a.y );
      if ( dy > cfg.w_max )
      {
        throw aqflow_error( "W_max " + std::to_string( cfg.w_max ) + " um is below the vertical hop of net " + n.name + " (" + std::to_string( dy ) +
                            " um)" );
      }
      double length = static_cast<double>( std::abs( b.x - a.x ) + dy );
      if ( iter == 0 && lengths && n.id < lengths->size() )
        length = std::max( length, ( *lengths )[n.id] );
      bool const measured = iter == 0 && lengths && n.id < lengths->size();
      double const limit = measured ? static_cast<double>( cfg.w_max ) : cfg.planning_limit();
      if ( length > limit )
      {
        /* every hop of the split net keeps roughly one row pitch of vertical length */
        auto const hop_dy = static_cast<double>( std::max<micron>( dy, buf.height + cfg.channel_gap ) );
        auto const room = cfg.planning_limit() - hop_dy;
        auto const horizontal = length - static_cast<double>( dy );
        auto const rows = room > 0.0 ? static_cast<micron>( std::ceil( horizontal / room ) ) - 1
                                     : static_cast<micron>( std::ceil( length / cfg.planning_limit() ) ) - 1;
        auto& slot = need[static_cast<std::size_t>( net_track( ntk, n.id ) )];
        slot = std::max( slot, std::max<micron>( rows, 1 ) );
        any = true;
      }
    }
    if ( !any )
      break;
    ++st.iterations;

    /* shift(p): rows inserted above phase p */
    std::vector<int> shift( static_cast<std::size_t>( pl.depth + 1 ), 0 );
    for ( int p = 0; p <= pl.depth; ++p )
    {
      shift[p] = ( p > 0 ? shift[p - 1] : 0 ) + static_cast<int>( need[p] );
    }
    std::vector<std::pair<net_id, micron>> crossing;
    std::vector<std::pair<point, point>> ends;
    for ( auto const& n : ntk.nets )
    {
      if ( n.sinks.empty() && !n.primary_output )
        continue;
      auto const t = static_cast<std::size_t>( net_track( ntk, n.id ) );
      if ( need[t] > 0 )
      {
        crossing.emplace_back( n.id, need[t] );
        ends.emplace_back( driver_pin( pl, ntk, n.id ), sink_pin( pl, ntk, n.id ) );
      }
    }
    for ( auto& g : ntk.gates )
    {
      g.phase += shift[g.phase];
    }

    auto const old_gates = ntk.gates.size();
    std::vector<micron> buffer_x;
    for ( std::size_t c = 0; c < crossing.size(); ++c )
    {
      auto const [n, r] = crossing[c];
      auto const [from, to] = ends[c];
      int const base_phase = ntk.driver_phase( n );
      net_id cur = n;
      std::vector<net_id> chain;
      for ( micron j = 1; j <= r; ++j )
      {
        auto const next = ntk.add_net( ntk.nets[n].name + "_r" + std::to_string( iter ) + "_" + std::to_string( j ) );
        ntk.add_gate( gate_type::buf, { cur }, { next }, base_phase + static_cast<int>( j ) );
        double const target = static_cast<double>( from.x ) + static_cast<double>( to.x - from.x ) * static_cast<double>( j ) / static_cast<double>( r + 1 );
        buffer_x.push_back( std::max<micron>( snap_to_grid( target - static_cast<double>( buf.input_pin( 0 ).dx ), cfg.grid_step ), 0 ) );
        chain.push_back( next );
        cur = next;
      }
      if ( !ntk.nets[n].sinks.empty() && ntk.nets[n].sinks.front().gate < old_gates )
      {
        auto const s = ntk.nets[n].sinks.front();
        ntk.rewire_input( s.gate, s.pin, cur );
      }
      else if ( ntk.nets[n].primary_output )
      {
        ntk.nets[n].primary_output = false;
        ntk.nets[cur].primary_output = true;
        for ( auto& po : ntk.outputs )
        {
          if ( po.net == n )
            po.net = cur;
        }
      }
      st.buffers_added += static_cast<std::size_t>( r );
    }

    /* rebuild the geometry, keeping x of existing gates and existing gaps */
    placement next = make_placement( ntk, lib, cfg );
    for ( std::size_t g = 0; g < old_gates; ++g )
      next.x[g] = pl.x[g];
    for ( std::size_t i = 0; i < buffer_x.size(); ++i )
      next.x[old_gates + i] = buffer_x[i];
    next.channel_gap.clear();
    for ( std::size_t t = 0; t < pl.channel_gap.size(); ++t )
    {
      next.channel_gap.push_back( pl.channel_gap[t] );
      for ( micron j = 0; j < need[t]; ++j )
        next.channel_gap.push_back( cfg.channel_gap );
    }
    next.layer_width = pl.layer_width;
    next.input_x = pl.input_x;
    next.output_x = pl.output_x;
    for ( auto const r : need )
      st.rows_added += static_cast<std::size_t>( r );

    next = legalize( next, ntk, cfg );
    pl = detailed_place( next, ntk, cfg, detailed_defaults( cfg ) );
  }
  if ( stats )
  {
    *stats = st;
  }
}

} // namespace aqflow
