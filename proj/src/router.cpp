#include <aqflow/router.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace aqflow
{

std::vector<double> route_db::lengths( std::size_t net_count ) const
{
  std::vector<double> out( net_count, 0.0 );
  for ( auto const& r : nets )
  {
    if ( r.net < net_count )
      out[r.net] = static_cast<double>( r.length );
  }
  return out;
}

int route_db::total_expansions() const
{
  int n = 0;
  for ( auto const e : expansions )
    n += e;
  return n;
}

namespace
{

micron channel_end( placement const& pl, int gap )
{
  bool const last = gap + 1 == pl.tracks() - 1;
  return last ? pl.track_bottom( gap + 1 ) : pl.track_bottom( gap + 1 ) - pl.grid_step;
}

channel_pin attach( channel_grid const& g, net_id net, point p )
{
  channel_pin pin;
  pin.net = net;
  pin.at = p;
  auto const r = p.x % g.grid;
  pin.col = std::clamp( static_cast<int>( p.x / g.grid + ( 2 * r > g.grid ? 1 : 0 ) ), 0, g.cols - 1 );
  if ( ( p.y - g.y0 ) % g.grid != 0 )
  {
    throw aqflow_error( "pin of net " + std::to_string( net ) + " is off the routing grid vertically" );
  }
  pin.row = static_cast<int>( ( p.y - g.y0 ) / g.grid );
  return pin;
}

} // namespace

channel_grid build_channel_grid( placement const& pl, netlist const& ntk, int gap, flow_config const& cfg )
{
  channel_grid g;
  g.gap = gap;
  g.grid = pl.grid_step;
  g.y0 = pl.track_bottom( gap );
  g.cols = static_cast<int>( pl.layer_width / pl.grid_step ) + 1;
  g.rows = static_cast<int>( ( channel_end( pl, gap ) - g.y0 ) / pl.grid_step ) + 1;
  for ( int l = 0; l < 2; ++l )
  {
    g.owner[l].assign( static_cast<std::size_t>( g.cols * g.rows ), node_free );
    g.halo[l].assign( static_cast<std::size_t>( g.cols * g.rows ), node_free );
  }
  auto const block = [&]( micron x0, micron x1, micron y0, micron y1 ) {
    int const c0 = static_cast<int>( std::max<micron>( ( x0 + g.grid - 1 ) / g.grid, 0 ) );
    int const c1 = static_cast<int>( std::min<micron>( x1 / g.grid, g.cols - 1 ) );
    int const r0 = static_cast<int>( std::max<micron>( ( y0 - g.y0 + g.grid - 1 ) / g.grid, 0 ) );
    int const r1 = static_cast<int>( std::min<micron>( ( y1 - g.y0 ) / g.grid, g.rows - 1 ) );
    for ( int r = r0; r <= r1; ++r )
      for ( int c = c0; c <= c1; ++c )
        for ( int l = 0; l < 2; ++l )
          g.owner[l][g.node( c, r )] = node_blocked;
  };
  for ( auto const& gt : ntk.gates )
  {
    int const t = placement::track_of_phase( gt.phase );
    if ( t != gap && t != gap + 1 )
      continue;
    auto const o = pl.cell_origin( ntk, gt.id );
    block( o.x, o.x + pl.width( gt.id ), o.y, o.y + pl.height( gt.id ) );
  }
  for ( auto const& n : ntk.nets )
  {
    if ( ( n.sinks.empty() && !n.primary_output ) || net_track( ntk, n.id ) != gap )
      continue;
    auto const a = attach( g, n.id, driver_pin( pl, ntk, n.id ) );
    auto const b = attach( g, n.id, sink_pin( pl, ntk, n.id ) );
    for ( auto const& p : { a, b } )
      for ( int l = 0; l < 2; ++l )
        g.owner[l][g.node( p.col, p.row )] = n.id;
    g.pins.emplace_back( a, b );
  }
  /* a pin can only leave vertically; keep its first s_min of escape for its own net */
  int const k = static_cast<int>( std::max<micron>( cfg.s_min / g.grid, 1 ) );
  for ( auto const& [a, b] : g.pins )
  {
    for ( auto const& [p, dir] : { std::pair{ a, 1 }, std::pair{ b, -1 } } )
    {
      for ( int i = 1; i <= k; ++i )
      {
        int const r = p.row + dir * i;
        if ( r < 0 || r >= g.rows )
          break;
        auto const n = g.node( p.col, r );
        if ( g.owner[0][n] != node_free || g.owner[1][n] != node_free )
          break;
        g.owner[0][n] = g.owner[1][n] = p.net;
      }
    }
  }
  return g;
}

namespace
{

constexpr int dcol[4] = { 1, -1, 0, 0 };
constexpr int drow[4] = { 0, 0, 1, -1 };
constexpr int no_dir = 4;

int axis( int d ) { return d < 2 ? 0 : 1; }
int opposite( int d ) { return d ^ 1; }

} // namespace

std::optional<routed_net> route_net( channel_grid const& grid, channel_pin const& from, channel_pin const& to, flow_config const& cfg )
{
  net_id const net = from.net;
  int const k = static_cast<int>( std::max<micron>( cfg.s_min / grid.grid, 1 ) );
  auto const via = static_cast<std::int64_t>( std::llround( cfg.effective_via_cost() ) );
  auto const step = static_cast<std::int64_t>( grid.grid );
  int const runs = k + 1;
  auto const state = [&]( int n, int d, int r ) { return ( static_cast<std::size_t>( n ) * 5 + static_cast<std::size_t>( d ) ) * static_cast<std::size_t>( runs ) + static_cast<std::size_t>( r ); };
  std::size_t const states = static_cast<std::size_t>( grid.cols * grid.rows ) * 5 * static_cast<std::size_t>( runs );

  constexpr auto inf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist( states, inf );
  std::vector<std::size_t> parent( states, std::numeric_limits<std::size_t>::max() );
  auto const heuristic = [&]( int c, int r ) { return step * ( std::abs( c - to.col ) + std::abs( r - to.row ) ); };

  using entry = std::tuple<std::int64_t, std::int64_t, std::size_t>;
  std::priority_queue<entry, std::vector<entry>, std::greater<>> open;
  auto const s0 = state( grid.node( from.col, from.row ), no_dir, 0 );
  dist[s0] = 0;
  open.emplace( heuristic( from.col, from.row ), 0, s0 );

  std::size_t goal_state = std::numeric_limits<std::size_t>::max();
  while ( !open.empty() )
  {
    auto const [f, g, s] = open.top();
    open.pop();
    if ( g != dist[s] )
      continue;
    int const r = static_cast<int>( s % runs );
    int const d = static_cast<int>( ( s / runs ) % 5 );
    int const n = static_cast<int>( s / runs / 5 );
    int const col = n % grid.cols, row = n / grid.cols;
    if ( col == to.col && row == to.row && ( d == no_dir || r >= k ) )
    {
      goal_state = s;
      break;
    }
    for ( int nd = 0; nd < 4; ++nd )
    {
      if ( d != no_dir && nd == opposite( d ) )
        continue;
      bool const turn = d != no_dir && axis( nd ) != axis( d );
      if ( turn && ( r < k || !grid.usable( 0, n, net ) || !grid.usable( 1, n, net ) ) )
        continue;
      int const nc = col + dcol[nd], nr = row + drow[nd];
      if ( nc < 0 || nr < 0 || nc >= grid.cols || nr >= grid.rows )
        continue;
      int const layer = axis( nd );
      int const nn = grid.node( nc, nr );
      if ( !grid.usable( layer, n, net ) || !grid.usable( layer, nn, net ) )
        continue;
      int const nrun = nd == d ? std::min( r + 1, k ) : 1;
      auto const ns = state( nn, nd, nrun );
      auto const cost = g + step + ( turn ? via : 0 );
      if ( cost < dist[ns] )
      {
        dist[ns] = cost;
        parent[ns] = s;
        open.emplace( cost + heuristic( nc, nr ), cost, ns );
      }
    }
  }
  if ( goal_state == std::numeric_limits<std::size_t>::max() )
  {
    return std::nullopt;
  }

  /* walk back to the start, then compress straight runs into segments */
  std::vector<std::pair<int, int>> path;
  for ( auto s = goal_state; s != std::numeric_limits<std::size_t>::max(); s = parent[s] )
  {
    int const n = static_cast<int>( s / runs / 5 );
    path.emplace_back( n, static_cast<int>( ( s / runs ) % 5 ) );
  }
  std::reverse( path.begin(), path.end() );

  routed_net out;
  out.net = net;
  out.gap = grid.gap;
  auto const pos = [&]( int n ) { return grid.position( n % grid.cols, n / grid.cols ); };
  auto const start_node = pos( path.front().first );
  if ( from.at != start_node )
    out.segments.push_back( { from.at, start_node, 0 } );
  std::size_t seg_start = 0;
  for ( std::size_t i = 1; i < path.size(); ++i )
  {
    bool const last = i + 1 == path.size();
    if ( last || path[i + 1].second != path[i].second )
    {
      out.segments.push_back( { pos( path[seg_start].first ), pos( path[i].first ), axis( path[i].second ) } );
      if ( !last )
        out.vias.push_back( pos( path[i].first ) );
      seg_start = i;
    }
  }
  auto const end_node = pos( path.back().first );
  if ( to.at != end_node )
    out.segments.push_back( { end_node, to.at, 0 } );
  for ( auto const& sg : out.segments )
    out.length += sg.length();
  return out;
}

void commit_route( channel_grid& grid, routed_net const& r, flow_config const& cfg )
{
  int const radius = grid.grid < cfg.s_min ? static_cast<int>( ( cfg.s_min - 1 ) / grid.grid ) : 0;
  auto const mark = [&]( int layer, int col, int row ) {
    auto& o = grid.owner[layer][grid.node( col, row )];
    if ( o == node_free )
      o = r.net;
    for ( int dr = -radius; dr <= radius; ++dr )
    {
      for ( int dc = -radius; dc <= radius; ++dc )
      {
        int const c = col + dc, w = row + dr;
        if ( c < 0 || w < 0 || c >= grid.cols || w >= grid.rows )
          continue;
        auto const n = grid.node( c, w );
        if ( grid.owner[layer][n] == node_free && grid.halo[layer][n] == node_free )
          grid.halo[layer][n] = r.net;
      }
    }
  };
  auto const on_grid = [&]( point p ) { return p.x % grid.grid == 0 && ( p.y - grid.y0 ) % grid.grid == 0; };
  for ( auto const& s : r.segments )
  {
    if ( !on_grid( s.a ) || !on_grid( s.b ) )
      continue;
    int c0 = static_cast<int>( s.a.x / grid.grid ), c1 = static_cast<int>( s.b.x / grid.grid );
    int r0 = static_cast<int>( ( s.a.y - grid.y0 ) / grid.grid ), r1 = static_cast<int>( ( s.b.y - grid.y0 ) / grid.grid );
    if ( c0 > c1 )
      std::swap( c0, c1 );
    if ( r0 > r1 )
      std::swap( r0, r1 );
    for ( int w = r0; w <= r1; ++w )
      for ( int c = c0; c <= c1; ++c )
        mark( s.layer, c, w );
  }
  for ( auto const& v : r.vias )
  {
    int const c = static_cast<int>( v.x / grid.grid ), w = static_cast<int>( ( v.y - grid.y0 ) / grid.grid );
    mark( 0, c, w );
    mark( 1, c, w );
  }
}

std::vector<std::string> congestion_map( channel_grid const& grid )
{
  std::vector<std::string> rows;
  for ( int r = 0; r < grid.rows; ++r )
  {
    std::string line;
    for ( int c = 0; c < grid.cols; ++c )
    {
      auto const n = grid.node( c, r );
      auto const h = grid.owner[0][n], v = grid.owner[1][n];
      if ( h == node_blocked && v == node_blocked )
        line += '#';
      else if ( h != node_free && v != node_free )
        line += '+';
      else if ( h != node_free )
        line += 'h';
      else if ( v != node_free )
        line += 'v';
      else
        line += '.';
    }
    rows.push_back( std::move( line ) );
  }
  return rows;
}

std::vector<routed_net> route_layer( placement& pl, netlist const& ntk, int gap, flow_config const& cfg, int* expansions )
{
  for ( int exp = 0;; ++exp )
  {
    auto grid = build_channel_grid( pl, ntk, gap, cfg );
    auto order = grid.pins;
    std::sort( order.begin(), order.end(), []( auto const& a, auto const& b ) {
      auto const la = std::abs( a.first.at.x - a.second.at.x ) + std::abs( a.first.at.y - a.second.at.y );
      auto const lb = std::abs( b.first.at.x - b.second.at.x ) + std::abs( b.first.at.y - b.second.at.y );
      return std::pair{ la, a.first.net } < std::pair{ lb, b.first.net };
    } );
    std::vector<routed_net> routed;
    std::optional<net_id> failed;
    for ( auto const& [a, b] : order )
    {
      auto r = route_net( grid, a, b, cfg );
      /* a detour that breaks W_max on a net that fits is worth another track */
      auto const manhattan = std::abs( a.at.x - b.at.x ) + std::abs( a.at.y - b.at.y );
      bool const detour = r && r->length > cfg.w_max && manhattan <= cfg.w_max && exp < cfg.max_expansions;
      if ( !r || detour )
      {
        failed = a.net;
        break;
      }
      commit_route( grid, *r, cfg );
      routed.push_back( std::move( *r ) );
    }
    if ( !failed )
    {
      std::sort( routed.begin(), routed.end(), []( auto const& x, auto const& y ) { return x.net < y.net; } );
      if ( expansions )
        *expansions = exp;
      return routed;
    }
    if ( exp >= cfg.max_expansions )
    {
      throw unroutable_error( "channel " + std::to_string( gap ) + " still unroutable after " + std::to_string( exp ) + " expansions (net " +
                                  ntk.nets[*failed].name + ")",
                              gap, congestion_map( grid ) );
    }
    pl.channel_gap.at( gap ) += cfg.s_min;
  }
}

route_db route_all( placement& pl, netlist const& ntk, flow_config const& cfg )
{
  route_db db;
  for ( int gap = 0; gap + 1 < pl.tracks(); ++gap )
  {
    int exp = 0;
    auto nets = route_layer( pl, ntk, gap, cfg, &exp );
    db.expansions.push_back( exp );
    for ( auto& r : nets )
      db.nets.push_back( std::move( r ) );
  }
  std::sort( db.nets.begin(), db.nets.end(), []( auto const& a, auto const& b ) { return a.net < b.net; } );
  for ( auto const& r : db.nets )
    db.total_length += r.length;
  return db;
}

} // namespace aqflow
