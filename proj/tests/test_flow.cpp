#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>

using namespace aqflow;
namespace fs = std::filesystem;

namespace
{

flow_options options_for( std::string const& fixture, std::string const& out )
{
  flow_options o;
  o.netlist_path = test::data_path( "fixtures/" + fixture + ".net" );
  o.out_dir = out;
  return o;
}

std::vector<std::string> const artifacts{ "maj.netlist.json", "balanced.netlist.json", "placed.json",    "routes.json",   "design.layout.json",
                                          "design.svg",       "drc.report.json",       "flow.report.json", "state.json" };

} // namespace

TEST_CASE( "flow writes every artifact and exits clean", "[flow]" )
{
  auto const out = test::scratch_dir( "flow_chain" );
  CHECK( cmd_flow( options_for( "chain", out ) ) == exit_clean );
  for ( auto const& a : artifacts )
  {
    INFO( a );
    CHECK( fs::exists( fs::path( out ) / a ) );
  }
  auto const report = json::parse( read_file( out + "/flow.report.json" ) );
  CHECK( report.at( "drc" ).at( "violations" ).get<int>() == 0 );
  auto const state = json::parse( read_file( out + "/state.json" ) );
  CHECK( state.contains( "runtime_ms" ) );
}

TEST_CASE( "malformed input exits 2 without creating the output", "[flow]" )
{
  auto const dir = test::scratch_dir( "flow_bad_in" );
  fs::create_directories( dir );
  write_file( dir + "/bad.net", ".inputs a\n.outputs y\nAND y a\n.end\n" );
  flow_options o;
  o.netlist_path = dir + "/bad.net";
  o.out_dir = dir + "/out";
  CHECK( cmd_flow( o ) == exit_input_error );
  CHECK_FALSE( fs::exists( o.out_dir ) );
}

TEST_CASE( "stage-by-stage runs equal the one-shot flow", "[flow]" )
{
  auto const a = test::scratch_dir( "flow_oneshot" );
  auto const b = test::scratch_dir( "flow_staged" );
  REQUIRE( cmd_flow( options_for( "full_adder", a ) ) == exit_clean );
  auto const o = options_for( "full_adder", b );
  for ( auto const& s : stage_names() )
    REQUIRE( cmd_stage( s, o ) == exit_clean );
  for ( auto const& f : artifacts )
  {
    if ( f == "state.json" )
      continue;
    INFO( f );
    CHECK( read_file( a + "/" + f ) == read_file( b + "/" + f ) );
  }
}

TEST_CASE( "stages refuse stale or missing inputs", "[flow]" )
{
  auto const dir = test::scratch_dir( "flow_stale" );
  auto const o = options_for( "and_or", dir );
  REQUIRE( cmd_stage( "synth", o ) == exit_clean );
  CHECK( cmd_stage( "place", o ) == exit_input_error );
  REQUIRE( cmd_stage( "balance", o ) == exit_clean );
  REQUIRE( cmd_stage( "place", o ) == exit_clean );
  auto placed = read_file( dir + "/placed.json" );
  placed.insert( placed.size() - 2, " " );
  write_file( dir + "/placed.json", placed );
  CHECK( cmd_stage( "route", o ) == exit_input_error );

  auto const empty = test::scratch_dir( "flow_nostate" );
  CHECK( cmd_stage( "route", options_for( "and_or", empty ) ) == exit_input_error );
}

TEST_CASE( "an invalid thread cap is a configuration error", "[flow]" )
{
  auto const dir = test::scratch_dir( "flow_threads" );
  ::setenv( "AQFLOW_THREADS", "zero", 1 );
  auto const rc = cmd_flow( options_for( "chain", dir ) );
  ::unsetenv( "AQFLOW_THREADS" );
  CHECK( rc == exit_input_error );
}

TEST_CASE( "unknown config overrides are rejected", "[flow]" )
{
  auto o = options_for( "chain", test::scratch_dir( "flow_override" ) );
  o.overrides.push_back( { "not_a_key", "1" } );
  CHECK( cmd_flow( o ) == exit_input_error );
}

TEST_CASE( "generated benchmarks are exact, valid and reproducible", "[flow]" )
{
  for ( std::uint64_t seed = 1; seed <= 100; ++seed )
  {
    bench_params ps;
    ps.gates = 5 + static_cast<int>( seed % 40 );
    ps.inputs = 2 + static_cast<int>( seed % 7 );
    ps.seed = seed;
    auto const text = write_netlist( generate_benchmark( ps ) );
    auto const ntk = parse_netlist( text );
    CHECK( ntk.gates.size() == static_cast<std::size_t>( ps.gates ) );
    CHECK( ntk.inputs.size() == static_cast<std::size_t>( ps.inputs ) );
    CHECK( ntk.outputs.size() >= static_cast<std::size_t>( std::min( ps.outputs, ps.gates ) ) );
    CHECK( validate_netlist( ntk, { false, false } ).empty() );
    CHECK( write_netlist( generate_benchmark( ps ) ) == text );
  }
  bench_params one;
  one.gates = 1;
  one.inputs = 2;
  one.outputs = 1;
  CHECK( generate_benchmark( one ).gates.size() == 1 );
  bench_params bad;
  bad.gates = 0;
  CHECK_THROWS_AS( generate_benchmark( bad ), input_error );
}

TEST_CASE( "artifact hashes are stable FNV-1a", "[flow]" )
{
  CHECK( fnv1a( "" ) == 0xcbf29ce484222325ull );
  CHECK( fnv1a( "a" ) == 0xaf63dc4c8601ec8cull );
  CHECK( fnv1a_hex( "a" ) == "af63dc4c8601ec8c" );
}
