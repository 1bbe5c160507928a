#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <queue>
#include <random>
#include <tuple>

#ifndef AQFLOW_DATA_DIR
#error "AQFLOW_DATA_DIR must point at the data directory"
#endif

namespace aqflow::test
{

std::string data_path( std::string const& relative )
{
  return std::string( AQFLOW_DATA_DIR ) + "/" + relative;
}

std::vector<std::string> fixture_names()
{
  std::vector<std::string> names;
  for ( auto const& e : std::filesystem::directory_iterator( data_path( "fixtures" ) ) )
  {
    if ( e.path().extension() == ".net" )
      names.push_back( e.path().stem().string() );
  }
  std::sort( names.begin(), names.end() );
  return names;
}

netlist load_fixture( std::string const& name )
{
  return parse_netlist( read_file( data_path( "fixtures/" + name + ".net" ) ) );
}

std::string scratch_dir( std::string const& name )
{
  auto const dir = std::filesystem::temp_directory_path() / ( "aqflow_test_" + name );
  std::filesystem::remove_all( dir );
  return dir.string();
}

netlist random_aoi( std::uint64_t seed )
{
  std::mt19937_64 rng( seed * 0x9e3779b97f4a7c15ull + 1 );
  bench_params ps;
  ps.gates = 1 + static_cast<int>( bounded_draw( rng, 60 ) );
  ps.inputs = 1 + static_cast<int>( bounded_draw( rng, static_cast<std::uint64_t>( std::min( 12, 2 * ps.gates ) ) ) );
  ps.outputs = 1 + static_cast<int>( bounded_draw( rng, static_cast<std::uint64_t>( std::min( 6, ps.gates ) ) ) );
  ps.seed = seed;
  return generate_benchmark( ps );
}

netlist to_majority( netlist const& aoi, cell_library const& lib )
{
  static std::map<std::tuple<int, int, int, int, int>, mapping_table> cache;
  auto const costs = mapping_costs::from_library( lib );
  auto const key = std::tuple{ costs.maj, costs.and_or, costs.inv, costs.buf, costs.constant };
  auto it = cache.find( key );
  if ( it == cache.end() )
    it = cache.emplace( key, build_mapping_table( costs ) ).first;
  return convert_to_majority( aoi, it->second );
}

netlist balance( netlist const& maj, cell_library const& lib )
{
  return insert_buffers( insert_splitters( maj, lib ) );
}

pipeline run_pipeline( netlist const& aoi, cell_library const& lib, flow_config const& cfg )
{
  pipeline p;
  p.maj = to_majority( aoi, lib );
  p.balanced = balance( p.maj, lib );
  p.pl = global_place( p.balanced, lib, cfg );
  p.pl = legalize( p.pl, p.balanced, cfg );
  p.pl = detailed_place( p.pl, p.balanced, cfg, detailed_defaults( cfg ) );
  insert_buffer_rows( p.pl, p.balanced, lib, cfg );
  p.routes = route_all( p.pl, p.balanced, cfg );
  p.lay = generate_layout( p.pl, p.balanced, p.routes, cfg );
  return p;
}

/* mapping oracles */

namespace
{

std::uint8_t maj( std::uint8_t x, std::uint8_t y, std::uint8_t z )
{
  return static_cast<std::uint8_t>( ( x & y ) | ( x & z ) | ( y & z ) );
}

std::vector<std::uint8_t> literal_choices()
{
  return { 0xaa, 0x55, 0xcc, 0x33, 0xf0, 0x0f, 0x00, 0xff };
}

} // namespace

std::set<std::uint8_t> oracle_one_level()
{
  std::set<std::uint8_t> out;
  for ( auto x : literal_choices() )
    for ( auto y : literal_choices() )
      for ( auto z : literal_choices() )
        out.insert( maj( x, y, z ) );
  return out;
}

std::set<std::uint8_t> oracle_two_level()
{
  auto const level1 = oracle_one_level();
  std::vector<std::uint8_t> f( level1.begin(), level1.end() );
  std::set<std::uint8_t> out;
  for ( auto x : f )
    for ( auto y : f )
      for ( auto z : f )
        for ( int mask = 0; mask < 8; ++mask )
        {
          auto const px = static_cast<std::uint8_t>( mask & 1 ? ~x : x );
          auto const py = static_cast<std::uint8_t>( mask & 2 ? ~y : y );
          auto const pz = static_cast<std::uint8_t>( mask & 4 ? ~z : z );
          out.insert( maj( px, py, pz ) );
        }
  return out;
}

std::uint8_t oracle_mapping_function( maj_mapping const& m )
{
  auto const eval = [&]( gate_config const& g, std::array<std::uint8_t, 3> const& level1 ) {
    std::array<std::uint8_t, 3> v{};
    for ( int i = 0; i < 3; ++i )
    {
      std::uint8_t x = 0;
      switch ( g.inputs[i].source )
      {
      case maj_source::leaf0: x = 0xaa; break;
      case maj_source::leaf1: x = 0xcc; break;
      case maj_source::leaf2: x = 0xf0; break;
      case maj_source::const0: x = 0x00; break;
      case maj_source::const1: x = 0xff; break;
      case maj_source::level1_0: x = level1[0]; break;
      case maj_source::level1_1: x = level1[1]; break;
      case maj_source::level1_2: x = level1[2]; break;
      }
      v[i] = g.inputs[i].inverted ? static_cast<std::uint8_t>( ~x ) : x;
    }
    return maj( v[0], v[1], v[2] );
  };
  if ( m.scheme == mapping_scheme::one_level )
    return eval( m.gates.at( 0 ), {} );
  std::array<std::uint8_t, 3> level1{ eval( m.gates.at( 0 ), {} ), eval( m.gates.at( 1 ), {} ), eval( m.gates.at( 2 ), {} ) };
  return eval( m.gates.at( 3 ), level1 );
}

/* balance oracles */

namespace
{

std::vector<int> asap( netlist const& ntk )
{
  std::vector<int> phase( ntk.gates.size(), -2 );
  /* relax until stable; fine for test-sized DAGs */
  bool changed = true;
  while ( changed )
  {
    changed = false;
    for ( auto const& g : ntk.gates )
    {
      int p = 0;
      for ( auto const n : g.fanin )
      {
        auto const& d = ntk.nets[n].driver;
        p = std::max( p, d ? phase[d->gate] + 1 : 0 );
      }
      if ( p != phase[g.id] )
      {
        phase[g.id] = p;
        changed = true;
      }
    }
  }
  return phase;
}

} // namespace

int oracle_depth( netlist const& ntk )
{
  auto const phase = asap( ntk );
  int d = 0;
  for ( auto const p : phase )
    d = std::max( d, p + 1 );
  return d;
}

std::size_t oracle_buffer_count( netlist const& ntk )
{
  auto const phase = asap( ntk );
  int depth = 0;
  for ( auto const p : phase )
    depth = std::max( depth, p + 1 );
  auto const driver_phase = [&]( net_id n ) {
    auto const& d = ntk.nets[n].driver;
    return d ? phase[d->gate] : -1;
  };
  std::size_t total = 0;
  for ( auto const& g : ntk.gates )
    for ( auto const n : g.fanin )
      total += static_cast<std::size_t>( phase[g.id] - driver_phase( n ) - 1 );
  for ( auto const& o : ntk.outputs )
    total += static_cast<std::size_t>( depth - 1 - driver_phase( o.net ) );
  return total;
}

double oracle_timing( int phase, double xs, double xe, double layer_width, double alpha )
{
  int p = phase % 4;
  if ( p < 0 )
    p += 4;
  double base = 0.0;
  if ( p == 0 )
    base = xe - xs;
  else if ( p == 1 )
    base = xe + xs;
  else if ( p == 2 )
    base = xs - xe;
  else
    base = 2.0 * layer_width - xe - xs;
  return base > 0.0 ? std::pow( base, alpha ) : 0.0;
}

std::optional<oracle_route> oracle_shortest_route( channel_grid const& grid, channel_pin const& from, channel_pin const& to, flow_config const& cfg )
{
  int const k = static_cast<int>( std::max<micron>( cfg.s_min / grid.grid, 1 ) );
  std::int64_t const via = std::llround( cfg.effective_via_cost() );
  std::int64_t const step = grid.grid;
  net_id const net = from.net;

  using key = std::tuple<int, int, int, int>; /* col, row, layer, run */
  std::map<key, std::pair<std::int64_t, std::int64_t>> best;
  using item = std::tuple<std::int64_t, std::int64_t, key>;
  std::priority_queue<item, std::vector<item>, std::greater<>> q;
  for ( int layer = 0; layer < 2; ++layer )
  {
    key const s{ from.col, from.row, layer, 0 };
    best[s] = { 0, 0 };
    q.emplace( 0, 0, s );
  }
  auto const push = [&]( key const& s, std::int64_t c, std::int64_t l ) {
    auto const it = best.find( s );
    if ( it == best.end() || std::pair{ c, l } < it->second )
    {
      best[s] = { c, l };
      q.emplace( c, l, s );
    }
  };
  while ( !q.empty() )
  {
    auto const [c, l, s] = q.top();
    q.pop();
    if ( best[s] != std::pair{ c, l } )
      continue;
    auto const [col, row, layer, run] = s;
    bool const at_start = col == from.col && row == from.row && run == 0;
    if ( col == to.col && row == to.row && ( run >= k || at_start ) )
      return oracle_route{ c, l };
    int const n = grid.node( col, row );
    /* same-layer moves: layer 0 along columns, layer 1 along rows */
    for ( int dir : { -1, 1 } )
    {
      int const nc = layer == 0 ? col + dir : col;
      int const nr = layer == 1 ? row + dir : row;
      if ( nc < 0 || nr < 0 || nc >= grid.cols || nr >= grid.rows )
        continue;
      int const nn = grid.node( nc, nr );
      if ( !grid.usable( layer, n, net ) || !grid.usable( layer, nn, net ) )
        continue;
      push( { nc, nr, layer, std::min( run + 1, k ) }, c + step, l + step );
    }
    /* via to the other layer once the current segment is long enough */
    if ( run >= k && grid.usable( 0, n, net ) && grid.usable( 1, n, net ) )
      push( { col, row, 1 - layer, 0 }, c + via, l );
  }
  return std::nullopt;
}

/* fixtures */

placed_fixture make_mixed_size()
{
  placed_fixture f;
  f.lib = sample_library();
  f.cfg.d_wire_ps_per_um = 0.4;
  auto& ntk = f.ntk;
  ntk.model = "mixed_size";
  std::vector<net_id> pi;
  for ( auto const* n : { "a", "b", "c", "d", "e", "f" } )
    pi.push_back( ntk.add_input( n ) );
  auto const o0 = ntk.add_net( "o0" ), o1 = ntk.add_net( "o1" ), o2 = ntk.add_net( "o2" );
  ntk.add_gate( gate_type::maj3, { pi[1], pi[2], pi[3] }, { o1 }, 0 );
  ntk.add_gate( gate_type::and2, { pi[4], pi[5] }, { o2 }, 0 );
  ntk.add_gate( gate_type::buf, { pi[0] }, { o0 }, 0 );
  auto const y0 = ntk.add_net( "y0" ), y1 = ntk.add_net( "y1" ), y2 = ntk.add_net( "y2" );
  ntk.add_gate( gate_type::buf, { o0 }, { y0 }, 1 );
  ntk.add_gate( gate_type::buf, { o1 }, { y1 }, 1 );
  ntk.add_gate( gate_type::buf, { o2 }, { y2 }, 1 );
  ntk.add_output( "y0", y0 );
  ntk.add_output( "y1", y1 );
  ntk.add_output( "y2", y2 );
  f.pl = make_placement( ntk, f.lib, f.cfg );
  /* row 0 is exactly as wide as the layer: nothing can slide, only reorder */
  f.pl.x = { 0, 60, 120, 0, 50, 110 };
  f.pl.layer_width = 160;
  spread_pads( f.pl );
  return f;
}

placed_fixture make_congested()
{
  placed_fixture f;
  f.lib = sample_library();
  auto& ntk = f.ntk;
  ntk.model = "congested";
  auto const a = ntk.add_input( "a" ), b = ntk.add_input( "b" );
  auto const p = ntk.add_net( "p" ), q = ntk.add_net( "q" );
  ntk.add_gate( gate_type::buf, { a }, { p }, 0 );
  ntk.add_gate( gate_type::buf, { b }, { q }, 0 );
  auto const y = ntk.add_net( "y" ), z = ntk.add_net( "z" );
  ntk.add_gate( gate_type::buf, { p }, { y }, 1 );
  ntk.add_gate( gate_type::buf, { q }, { z }, 1 );
  ntk.add_output( "y", y );
  ntk.add_output( "z", z );
  f.pl = make_placement( ntk, f.lib, f.cfg );
  /* p runs 20 -> 80 and q 60 -> 120: each crosses the other's pin escape on a single track */
  f.pl.x = { 0, 40, 60, 100 };
  f.pl.layer_width = 160;
  spread_pads( f.pl );
  return f;
}

placed_fixture make_long_net()
{
  placed_fixture f;
  f.lib = sample_library();
  auto& ntk = f.ntk;
  ntk.model = "long_net";
  auto const a = ntk.add_input( "a" ), b = ntk.add_input( "b" );
  auto const p = ntk.add_net( "p" ), q = ntk.add_net( "q" ), y = ntk.add_net( "y" ), z = ntk.add_net( "z" );
  ntk.add_gate( gate_type::buf, { a }, { p }, 0 );
  ntk.add_gate( gate_type::buf, { b }, { q }, 0 );
  ntk.add_gate( gate_type::buf, { p }, { y }, 1 );
  ntk.add_gate( gate_type::buf, { q }, { z }, 1 );
  ntk.add_output( "z", z );
  ntk.add_output( "y", y );
  f.pl = make_placement( ntk, f.lib, f.cfg );
  /* pads land at 500 and 1500; p runs 500 -> 1960 and q 1500 -> 60, about 2.5 W_max each */
  f.pl.x = { 480, 1480, 1940, 40 };
  f.pl.layer_width = 2000;
  spread_pads( f.pl );
  return f;
}

std::size_t shared_nodes( route_db const& db, micron grid )
{
  std::map<std::tuple<int, micron, micron>, std::set<net_id>> owners;
  auto const claim = [&]( int layer, point p, net_id n ) { owners[{ layer, p.x, p.y }].insert( n ); };
  for ( auto const& r : db.nets )
  {
    for ( auto const& s : r.segments )
    {
      auto const dx = s.b.x > s.a.x ? grid : s.b.x < s.a.x ? -grid : 0;
      auto const dy = s.b.y > s.a.y ? grid : s.b.y < s.a.y ? -grid : 0;
      auto p = s.a;
      claim( s.layer, p, r.net );
      while ( std::abs( s.b.x - p.x ) >= grid || std::abs( s.b.y - p.y ) >= grid )
      {
        p.x += std::abs( s.b.x - p.x ) >= grid ? dx : 0;
        p.y += std::abs( s.b.y - p.y ) >= grid ? dy : 0;
        claim( s.layer, p, r.net );
      }
      claim( s.layer, s.b, r.net );
    }
    for ( auto const& v : r.vias )
    {
      claim( 0, v, r.net );
      claim( 1, v, r.net );
    }
  }
  std::size_t shared = 0;
  for ( auto const& [at, nets] : owners )
    shared += nets.size() > 1 ? 1 : 0;
  return shared;
}

} // namespace aqflow::test
