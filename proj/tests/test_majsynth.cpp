#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace aqflow;

namespace
{

mapping_table const& table()
{
  static auto const t = build_mapping_table();
  return t;
}

} // namespace

TEST_CASE( "reachable function counts are frozen", "[majsynth]" )
{
  std::size_t one = 0, two = 0;
  for ( int f = 0; f < 256; ++f )
  {
    one += table().one_level( static_cast<std::uint8_t>( f ) ).has_value();
    two += table().two_level( static_cast<std::uint8_t>( f ) ).has_value();
  }
  CHECK( one == 40 );
  CHECK( two == 256 );
  CHECK( table().size() == 256 );
  CHECK( one == test::oracle_one_level().size() );
}

TEST_CASE( "every stored mapping computes its function", "[majsynth]" )
{
  for ( int f = 0; f < 256; ++f )
  {
    for ( auto const* m : { &table().one_level( f ), &table().two_level( f ) } )
    {
      if ( !m->has_value() )
        continue;
      CHECK( ( *m )->function == f );
      CHECK( test::oracle_mapping_function( **m ) == f );
      CHECK( evaluate_program( ( *m )->program ) == f );
    }
  }
}

TEST_CASE( "plain majority maps to one MAJ3 without inversions", "[majsynth]" )
{
  auto const& m = table().one_level( 0xe8 );
  REQUIRE( m.has_value() );
  CHECK( m->cost.jj_count == 6 );
  CHECK( m->cost.levels == 1 );
  REQUIRE( m->gates.size() == 1 );
  for ( auto const& in : m->gates[0].inputs )
    CHECK_FALSE( in.inverted );
}

TEST_CASE( "majority with a constant realizes AND and OR", "[majsynth]" )
{
  gate_config and_cfg{ { maj_input{ maj_source::leaf0 }, maj_input{ maj_source::leaf1 }, maj_input{ maj_source::const0 } } };
  gate_config or_cfg{ { maj_input{ maj_source::leaf0 }, maj_input{ maj_source::leaf1 }, maj_input{ maj_source::const1 } } };
  CHECK( realize_one_level( and_cfg ).function == ( 0xaa & 0xcc ) );
  CHECK( realize_one_level( or_cfg ).function == ( 0xaa | 0xcc ) );
  CHECK( realize_one_level( and_cfg ).program.cells.back().type == gate_type::and2 );
}

TEST_CASE( "and-or cut yields the expected table", "[majsynth]" )
{
  auto const ntk = test::load_fixture( "and_or" );
  auto const cuts = enumerate_cuts( ntk );
  REQUIRE( cuts.size() == 1 );
  CHECK( cuts[0].function == 0b10101000 );
  auto const ms = match_majority( cuts[0], table() );
  REQUIRE_FALSE( ms.empty() );
  CHECK( ms.front().function == 0b10101000 );
  for ( std::size_t i = 1; i < ms.size(); ++i )
    CHECK( ms[i - 1].cost <= ms[i].cost );
}

TEST_CASE( "small cones have no three-leaf cut", "[majsynth]" )
{
  netlist two;
  auto const a = two.add_input( "a" ), b = two.add_input( "b" );
  auto const y = two.add_net( "y" );
  two.add_gate( gate_type::and2, { a, b }, { y } );
  two.add_output( "y", y );
  CHECK_FALSE( find_cut( two, 0 ).has_value() );

  netlist four;
  std::vector<net_id> pis;
  for ( auto const* n : { "a", "b", "c", "d" } )
    pis.push_back( four.add_input( n ) );
  auto const l = four.add_net( "l" ), r = four.add_net( "r" ), z = four.add_net( "z" );
  four.add_gate( gate_type::and2, { pis[0], pis[1] }, { l } );
  four.add_gate( gate_type::and2, { pis[2], pis[3] }, { r } );
  auto const root = four.add_gate( gate_type::and2, { l, r }, { z } );
  four.add_output( "z", z );
  CHECK_FALSE( find_cut( four, root ).has_value() );
}

TEST_CASE( "full adder carry is recovered as a single majority", "[majsynth]" )
{
  auto const aoi = test::load_fixture( "full_adder" );
  auto const lib = sample_library();
  convert_stats st;
  auto const maj = convert_to_majority( aoi, table(), &st );
  CHECK( st.accepted >= 1 );
  CHECK( st.final_jj <= st.initial_jj );
  CHECK( st.final_depth <= st.initial_depth );
  auto const majs = std::count_if( maj.gates.begin(), maj.gates.end(), []( gate const& g ) { return g.type == gate_type::maj3; } );
  CHECK( majs >= 1 );
  CHECK( simulate_exhaustive( maj ) == simulate_exhaustive( aoi ) );
}

TEST_CASE( "constant functions map to constant cells", "[majsynth]" )
{
  auto const* zero = table().best( 0x00 );
  REQUIRE( zero != nullptr );
  REQUIRE( zero->program.cells.size() == 1 );
  CHECK( zero->program.cells[0].type == gate_type::const0 );
}

TEST_CASE( "conversion never increases jj count or depth", "[majsynth]" )
{
  auto const lib = sample_library();
  for ( std::uint64_t seed = 1; seed <= 30; ++seed )
  {
    auto const aoi = test::random_aoi( seed );
    convert_stats st;
    auto const maj = convert_to_majority( aoi, table(), &st );
    CHECK( st.final_jj <= st.initial_jj );
    CHECK( st.final_depth <= st.initial_depth );
    CHECK( simulate_exhaustive( maj ) == simulate_exhaustive( aoi ) );
  }
}

TEST_CASE( "a buffer-only netlist passes through unchanged", "[majsynth]" )
{
  auto const aoi = test::load_fixture( "chain" );
  auto const maj = convert_to_majority( aoi, table() );
  CHECK( maj.gates.size() == aoi.gates.size() );
  for ( auto const& g : maj.gates )
    CHECK( g.type == gate_type::buf );
}
