#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace aqflow;

TEST_CASE( "weighted-average extent tends to the true extent", "[cost]" )
{
  vector_x<double> v( 4 );
  v << 10.0, 250.0, 40.0, 90.0;
  double previous = 1e9;
  for ( double gamma : { 100.0, 40.0, 10.0, 1.0, 0.1 } )
  {
    auto const e = wa_extent<double>( v, gamma );
    CHECK( e <= 240.0 + 1e-9 );
    CHECK( std::abs( 240.0 - e ) <= std::abs( 240.0 - previous ) + 1e-9 );
    previous = e;
  }
  CHECK( previous == Catch::Approx( 240.0 ).margin( 1e-6 ) );
}

TEST_CASE( "timing cost cases and the clamp", "[cost]" )
{
  CHECK( timing_cost<double>( 0, 0.0, 20.0, 100.0, 2.0 ).cost == Catch::Approx( 400.0 ) );
  CHECK( timing_cost<double>( 0, 20.0, 0.0, 100.0, 2.0 ).cost == 0.0 );
  CHECK( timing_cost<double>( 1, 10.0, 20.0, 100.0, 2.0 ).cost == Catch::Approx( 900.0 ) );
  CHECK( timing_cost<double>( 2, 30.0, 10.0, 100.0, 2.0 ).cost == Catch::Approx( 400.0 ) );
  CHECK( timing_cost<double>( 3, 90.0, 80.0, 100.0, 2.0 ).cost == Catch::Approx( 900.0 ) );
  CHECK( timing_cost<double>( 4, 0.0, 20.0, 100.0, 2.0 ).cost == Catch::Approx( 400.0 ) );
  CHECK( timing_cost<double>( -1, 10.0, 20.0, 100.0, 2.0 ).cost == Catch::Approx( 28900.0 ) );
  CHECK( clock_phase( -1 ) == 3 );
}

TEST_CASE( "timing cost matches the case-table oracle", "[cost]" )
{
  std::mt19937_64 rng( 11 );
  std::uniform_real_distribution<double> u( 0.0, 1.0 );
  for ( int i = 0; i < 200; ++i )
  {
    int const phase = static_cast<int>( bounded_draw( rng, 8 ) ) - 1;
    double const w = 100.0 + 900.0 * u( rng );
    double const xs = w * u( rng ), xe = w * u( rng );
    CHECK( timing_cost<double>( phase, xs, xe, w, 2.0 ).cost == Catch::Approx( test::oracle_timing( phase, xs, xe, w, 2.0 ) ) );
  }
}

TEST_CASE( "phase budget and slack", "[cost]" )
{
  flow_config cfg;
  auto const rep = analyze_timing( std::vector<double>{ 100.0, 2000.0, 2730.0 }, cfg );
  CHECK( rep.budget_ps == Catch::Approx( 50.0 ) );
  CHECK( rep.slack_ps[0] == Catch::Approx( 43.0 ) );
  CHECK( rep.slack_ps[1] == Catch::Approx( 5.0 ) );
  CHECK( rep.slack_ps[2] == Catch::Approx( -9.6 ) );
  REQUIRE( rep.wns_ps.has_value() );
  CHECK( *rep.wns_ps == Catch::Approx( -9.6 ) );
  CHECK_FALSE( analyze_timing( std::vector<double>{ 100.0 }, cfg ).wns_ps.has_value() );
}

TEST_CASE( "analytic gradients agree with finite differences", "[cost]" )
{
  auto const lib = sample_library();
  flow_config cfg;
  auto const bal = test::balance( test::to_majority( test::load_fixture( "mux4" ), lib ), lib );
  auto const pl = global_place( bal, lib, cfg );
  auto const m = build_model( pl, bal );
  auto x = positions( pl );
  auto ps = objective_params::from_config( cfg );
  ps.w_max = 50.0;
  auto const g = total_objective<double>( m, x, ps ).gradient;
  auto const gw = wa_wirelength<double>( m, x, ps.gamma ).gradient;
  double const h = 1e-4;
  for ( Eigen::Index i = 0; i < x.size(); ++i )
  {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    double const fd = ( total_objective<double>( m, xp, ps ).cost - total_objective<double>( m, xm, ps ).cost ) / ( 2 * h );
    double const fw = ( wa_wirelength<double>( m, xp, ps.gamma ).cost - wa_wirelength<double>( m, xm, ps.gamma ).cost ) / ( 2 * h );
    CHECK( g[i] == Catch::Approx( fd ).epsilon( 1e-4 ).margin( 1e-6 ) );
    CHECK( gw[i] == Catch::Approx( fw ).epsilon( 1e-4 ).margin( 1e-6 ) );
  }
}

TEST_CASE( "exact objective equals hpwl when penalties are off", "[cost]" )
{
  auto const lib = sample_library();
  flow_config cfg;
  auto const p = test::run_pipeline( test::load_fixture( "full_adder" ), lib, cfg );
  auto const m = build_model( p.pl, p.balanced );
  objective_params ps;
  ps.w_max = 1e9;
  auto const x = positions( p.pl );
  CHECK( exact_objective<double>( m, x, ps ) == Catch::Approx( static_cast<double>( hpwl( p.pl, p.balanced ) ) ) );
  CHECK( hpwl<double>( m, x ) == Catch::Approx( static_cast<double>( hpwl( p.pl, p.balanced ) ) ) );
}
