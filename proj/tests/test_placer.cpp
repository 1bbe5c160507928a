#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace aqflow;

TEST_CASE( "legalization keeps order and produces legal rows", "[placer]" )
{
  auto const lib = sample_library();
  flow_config cfg;
  std::mt19937_64 rng( 5 );
  for ( std::uint64_t seed = 1; seed <= 40; ++seed )
  {
    auto const bal = test::balance( test::to_majority( test::random_aoi( seed ), lib ), lib );
    auto pl = make_placement( bal, lib, cfg );
    for ( auto& x : pl.x )
      x = static_cast<micron>( bounded_draw( rng, static_cast<std::uint64_t>( pl.layer_width ) + 1 ) );
    auto const before = rows_by_x( pl, bal );
    auto const legal = legalize( pl, bal, cfg );
    CHECK( legality_errors( legal, bal, cfg ).empty() );
    CHECK( rows_by_x( legal, bal ) == before );
  }
}

TEST_CASE( "window solver matches exhaustive enumeration", "[placer]" )
{
  std::mt19937_64 rng( 9 );
  micron const grid = 10, s_min = 10;
  for ( int trial = 0; trial < 200; ++trial )
  {
    std::vector<micron> widths{ 40, 60 };
    std::vector<std::vector<double>> price( 2, std::vector<double>( 30 ) );
    for ( auto& row : price )
      for ( auto& p : row )
        p = static_cast<double>( bounded_draw( rng, 1000 ) );
    micron const lo = 0, hi = 150;
    std::optional<micron> left;
    if ( trial % 2 )
      left = 10;
    auto const cost = [&]( std::size_t i, micron x ) { return price[i][static_cast<std::size_t>( x / grid )]; };
    auto const sol = solve_window( widths, lo, hi, left, std::nullopt, grid, s_min, cost );

    double best = 1e18;
    for ( micron a = lo; a <= hi; a += grid )
    {
      if ( a + widths[0] > hi || ( left && !spacing_ok( *left, a, s_min ) ) )
        continue;
      for ( micron b = lo; b <= hi; b += grid )
      {
        if ( !spacing_ok( a + widths[0], b, s_min ) || b + widths[1] > hi )
          continue;
        best = std::min( best, cost( 0, a ) + cost( 1, b ) );
      }
    }
    REQUIRE( sol.has_value() );
    CHECK( sol->cost == Catch::Approx( best ) );
  }
}

TEST_CASE( "detailed placement never raises the exact cost", "[placer]" )
{
  auto const lib = sample_library();
  flow_config cfg;
  for ( std::uint64_t seed = 1; seed <= 5; ++seed )
  {
    auto const bal = test::balance( test::to_majority( test::random_aoi( seed ), lib ), lib );
    auto const legal = legalize( global_place( bal, lib, cfg ), bal, cfg );
    detailed_stats st;
    auto const dp = detailed_place( legal, bal, cfg, detailed_defaults( cfg ), &st );
    REQUIRE_FALSE( st.cost_trace.empty() );
    for ( std::size_t i = 1; i < st.cost_trace.size(); ++i )
      CHECK( st.cost_trace[i] < st.cost_trace[i - 1] );
    CHECK( legality_errors( dp, bal, cfg ).empty() );
  }
}

TEST_CASE( "a net of about 2.5 W_max gets two buffer rows", "[placer]" )
{
  auto fx = test::make_long_net();
  REQUIRE( max_net_length( fx.pl, fx.ntk ) > 2 * fx.cfg.w_max );
  buffer_row_stats st;
  insert_buffer_rows( fx.pl, fx.ntk, fx.lib, fx.cfg, &st );
  CHECK( st.rows_added == 2 );
  CHECK( max_net_length( fx.pl, fx.ntk ) <= fx.cfg.w_max );
  CHECK( validate_netlist( fx.ntk ).empty() );
}

TEST_CASE( "a vertical hop above W_max is rejected", "[placer]" )
{
  auto fx = test::make_long_net();
  fx.pl.channel_gap[1] = 2 * fx.cfg.w_max;
  CHECK_THROWS_AS( insert_buffer_rows( fx.pl, fx.ntk, fx.lib, fx.cfg ), aqflow_error );
}

TEST_CASE( "global placement beats random placement", "[placer]" )
{
  auto const lib = sample_library();
  flow_config cfg;
  auto const bal = test::balance( test::to_majority( test::random_aoi( 4 ), lib ), lib );
  auto const legal = legalize( global_place( bal, lib, cfg ), bal, cfg );
  auto const rnd = random_place( bal, lib, cfg, 4 );
  CHECK( hpwl( legal, bal ) < hpwl( rnd, bal ) );
}

TEST_CASE( "channel reservation follows track density", "[placer]" )
{
  auto fx = test::make_congested();
  auto const before = fx.pl.channel_gap;
  auto const added = reserve_channel_heights( fx.pl, fx.ntk, fx.cfg );
  for ( std::size_t i = 0; i < before.size(); ++i )
    CHECK( fx.pl.channel_gap[i] >= before[i] );
  CHECK( added >= 0 );
  CHECK( reserve_channel_heights( fx.pl, fx.ntk, fx.cfg ) == 0 );
}
