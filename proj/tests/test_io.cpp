#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <regex>

using namespace aqflow;

TEST_CASE( "netlist parser accepts forward references and comments", "[io]" )
{
  auto const ntk = parse_netlist( ".model m\n.inputs a b\n.outputs y\n# y uses t before t is defined\nAND y a t\nNOT t b\n.end\n" );
  CHECK( ntk.gates.size() == 2 );
  auto const out = simulate_exhaustive( ntk );
  CHECK( ( out[0][0] & 0xf ) == 0x2 );
}

TEST_CASE( "netlist parse errors carry line and column", "[io]" )
{
  auto const fails_at = []( std::string const& text, int line ) {
    try
    {
      parse_netlist( text );
    }
    catch ( parse_error const& e )
    {
      return e.line == line;
    }
    return false;
  };
  CHECK( fails_at( ".inputs a\n.outputs y\nFOO y a\n.end\n", 3 ) );
  CHECK( fails_at( ".inputs a\n.outputs y\nAND y a\n.end\n", 3 ) );
  CHECK( fails_at( ".inputs a\n.outputs y\nBUF y a\nBUF y a\n.end\n", 4 ) );
  CHECK( fails_at( ".inputs a\n.outputs y\nAND y a z\n.end\n", 3 ) );
  CHECK( fails_at( ".inputs a\n.outputs y\nBUF y a\n", 3 ) );
  /* a combinational loop is reported at its first gate */
  CHECK( fails_at( ".inputs a\n.outputs y\nAND y a z\nBUF z y\n.end\n", 3 ) );
}

TEST_CASE( "netlist text round trip", "[io]" )
{
  for ( auto const& name : test::fixture_names() )
  {
    auto const ntk = test::load_fixture( name );
    auto const again = parse_netlist( write_netlist( ntk ) );
    CHECK( write_netlist( again ) == write_netlist( ntk ) );
    CHECK( simulate_exhaustive( again ) == simulate_exhaustive( ntk ) );
  }
}

TEST_CASE( "cell library text round trip and checks", "[io]" )
{
  auto const text = read_file( test::data_path( "sample.lib" ) );
  auto const lib = parse_cell_library( text );
  CHECK( write_cell_library( lib ) == text );
  CHECK( lib.at( "MAJ3" ).width == 60 );
  /* an input pin must sit on the top edge */
  auto moved = text;
  moved.replace( moved.find( "pin 20 0" ), 8, "pin 20 10" );
  try
  {
    parse_cell_library( moved );
    FAIL( "pin off the top edge was accepted" );
  }
  catch ( parse_error const& e )
  {
    CHECK( std::string( e.what() ).find( "not on its edge" ) != std::string::npos );
  }
}

TEST_CASE( "config text round trip and rejection", "[io]" )
{
  auto const cfg = parse_config( read_file( test::data_path( "default.cfg" ) ) );
  CHECK( write_config( cfg ) == write_config( flow_config{} ) );
  auto const tuned = parse_config( "w_max = 800 # comment\nrng_seed = 9\n" );
  CHECK( tuned.w_max == 800 );
  CHECK( tuned.rng_seed == 9 );
  CHECK_THROWS_AS( parse_config( "no_such_key = 1\n" ), config_error );
  CHECK_THROWS_AS( parse_config( "s_min = 15\n" ), config_error );
}

TEST_CASE( "single buffer renders as one 40x30 rect", "[io]" )
{
  layout lay;
  lay.model = "one";
  lay.die = { -20, -20, 60, 50 };
  lay.cells.push_back( { "g0", "BUF", 0, 1, 0, 0, 40, 30, 0 } );
  auto const svg = write_layout_svg( lay );
  std::regex const rect( R"(<rect x="0" y="0" width="40" height="30")" );
  auto const begin = std::sregex_iterator( svg.begin(), svg.end(), rect );
  CHECK( std::distance( begin, std::sregex_iterator() ) == 1 );
}

TEST_CASE( "layout JSON round trip and golden chain output", "[io]" )
{
  auto const lib = sample_library();
  flow_config const cfg;
  auto const p = test::run_pipeline( test::load_fixture( "chain" ), lib, cfg );
  auto const json_text = dump( layout_to_json( p.lay ) );
  CHECK( layout_from_json( json::parse( json_text ) ) == p.lay );
  CHECK( dump( layout_to_json( layout_from_json( json::parse( json_text ) ) ) ) == json_text );
  CHECK( json_text == read_file( test::data_path( "golden/chain.layout.json" ) ) );
  CHECK( write_layout_svg( p.lay ) == read_file( test::data_path( "golden/chain.svg" ) ) );
}

TEST_CASE( "routes and placement JSON round trip", "[io]" )
{
  auto const lib = sample_library();
  flow_config const cfg;
  auto const p = test::run_pipeline( test::load_fixture( "full_adder" ), lib, cfg );
  auto const routes = routes_from_json( routes_to_json( p.routes ) );
  CHECK( routes.nets == p.routes.nets );
  CHECK( routes.expansions == p.routes.expansions );
  auto pl = placement_from_json( placement_to_json( p.pl ) );
  for ( auto& k : pl.kinds )
    k = lib.at( k.name );
  CHECK( pl == p.pl );
  auto const ntk = netlist_from_json( netlist_to_json( p.balanced ) );
  CHECK( dump( netlist_to_json( ntk ) ) == dump( netlist_to_json( p.balanced ) ) );
}

TEST_CASE( "emitted coordinates are multiples of the grid", "[io]" )
{
  auto const lib = sample_library();
  flow_config const cfg;
  auto const p = test::run_pipeline( test::load_fixture( "mux4" ), lib, cfg );
  for ( auto const& c : p.lay.cells )
  {
    CHECK( c.x % 10 == 0 );
    CHECK( c.y % 10 == 0 );
  }
  for ( auto const& w : p.lay.wires )
  {
    CHECK( w.a.x % 10 == 0 );
    CHECK( w.b.y % 10 == 0 );
  }
  CHECK( hpwl( p.pl, p.balanced ) % 10 == 0 );
}
