#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace aqflow;

namespace
{

/* two buffers in consecutive rows, driver at x = xa, sink at x = xb */
test::placed_fixture two_buffers( micron xa, micron xb, micron width )
{
  test::placed_fixture f;
  f.lib = sample_library();
  auto const a = f.ntk.add_input( "a" );
  auto const p = f.ntk.add_net( "p" ), y = f.ntk.add_net( "y" );
  f.ntk.add_gate( gate_type::buf, { a }, { p }, 0 );
  f.ntk.add_gate( gate_type::buf, { p }, { y }, 1 );
  f.ntk.add_output( "y", y );
  f.pl = make_placement( f.ntk, f.lib, f.cfg );
  f.pl.x = { xa, xb };
  f.pl.layer_width = width;
  f.pl.input_x = { xa + 20 };
  f.pl.output_x = { xb + 20 };
  f.pl.channel_gap[1] = 60;
  return f;
}

} // namespace

TEST_CASE( "off-pitch pins attach to the nearest column, lower on a tie", "[router]" )
{
  auto f = two_buffers( 0, 200, 300 );
  f.pl.x = { 15, 200 };
  auto const grid = build_channel_grid( f.pl, f.ntk, 1, f.cfg );
  REQUIRE( grid.pins.size() == 1 );
  /* output pin of the first buffer sits at x = 35 */
  CHECK( grid.pins[0].first.at.x == 35 );
  CHECK( grid.pins[0].first.col == 3 );
}

TEST_CASE( "an offset two-pin net routes as an L or Z with the minimum length", "[router]" )
{
  auto f = two_buffers( 0, 200, 300 );
  auto const db = route_all( f.pl, f.ntk, f.cfg );
  auto const it = std::find_if( db.nets.begin(), db.nets.end(), []( routed_net const& r ) { return r.gap == 1; } );
  REQUIRE( it != db.nets.end() );
  CHECK( it->length == 200 + f.pl.channel_gap[1] );
  CHECK( it->vias.size() >= 1 );
  CHECK( it->vias.size() <= 2 );
  for ( auto const& s : it->segments )
    CHECK( ( s.layer == 0 ? s.a.y == s.b.y : s.a.x == s.b.x ) );
}

TEST_CASE( "a straight net needs no via", "[router]" )
{
  auto f = two_buffers( 100, 100, 300 );
  auto const db = route_all( f.pl, f.ntk, f.cfg );
  for ( auto const& r : db.nets )
  {
    CHECK( r.vias.empty() );
    CHECK( r.segments.size() == 1 );
  }
}

TEST_CASE( "A* agrees with the Dijkstra oracle on empty channels", "[router]" )
{
  std::mt19937_64 rng( 21 );
  for ( int i = 0; i < 100; ++i )
  {
    auto const xa = static_cast<micron>( bounded_draw( rng, 40 ) ) * 10;
    auto const xb = static_cast<micron>( bounded_draw( rng, 40 ) ) * 10;
    auto f = two_buffers( xa, xb, 440 );
    f.pl.channel_gap[1] = 20 + 10 * static_cast<micron>( bounded_draw( rng, 6 ) );
    auto const grid = build_channel_grid( f.pl, f.ntk, 1, f.cfg );
    auto const& [from, to] = grid.pins.at( 0 );
    auto const r = route_net( grid, from, to, f.cfg );
    auto const o = test::oracle_shortest_route( grid, from, to, f.cfg );
    REQUIRE( r.has_value() == o.has_value() );
    if ( !r )
      continue;
    auto const cost = r->length + static_cast<micron>( r->vias.size() ) * std::llround( f.cfg.effective_via_cost() );
    CHECK( cost == o->cost );
  }
}

TEST_CASE( "a congested channel expands once and only below its row", "[router]" )
{
  auto fx = test::make_congested();
  auto const before = fx.pl;
  auto const db = route_all( fx.pl, fx.ntk, fx.cfg );
  REQUIRE( db.expansions.size() == before.channel_gap.size() );
  CHECK( db.total_expansions() == 1 );
  CHECK( db.expansions[1] == 1 );
  CHECK( fx.pl.channel_gap[1] == before.channel_gap[1] + fx.cfg.s_min );
  for ( int t = 0; t <= 1; ++t )
    CHECK( fx.pl.track_top( t ) == before.track_top( t ) );
  CHECK( fx.pl.x == before.x );
  CHECK( test::shared_nodes( db, fx.cfg.grid_step ) == 0 );
}

TEST_CASE( "an unroutable channel reports a congestion map", "[router]" )
{
  auto fx = test::make_congested();
  fx.cfg.max_expansions = 0;
  try
  {
    route_all( fx.pl, fx.ntk, fx.cfg );
    FAIL( "expected unroutable_error" );
  }
  catch ( unroutable_error const& e )
  {
    CHECK( e.gap == 1 );
    CHECK_FALSE( e.congestion.empty() );
  }
}

TEST_CASE( "routed nets never share a node on one layer", "[router]" )
{
  auto const lib = sample_library();
  flow_config cfg;
  for ( auto const& name : test::fixture_names() )
  {
    auto const p = test::run_pipeline( test::load_fixture( name ), lib, cfg );
    CHECK( test::shared_nodes( p.routes, cfg.grid_step ) == 0 );
    for ( auto const& r : p.routes.nets )
    {
      micron len = 0;
      for ( auto const& s : r.segments )
        len += s.length();
      CHECK( len == r.length );
    }
  }
}
