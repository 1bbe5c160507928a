#include <aqflow/flow.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace
{

struct common_args
{
  std::string netlist;
  std::string library;
  std::string config;
  std::string out{ "out" };
  std::uint64_t seed{ 0 };
  std::vector<std::string> sets;
  bool trace{ false };
  bool majtable{ false };
  bool verbose{ false };
};

void add_common( CLI::App* app, common_args& a, bool takes_netlist )
{
  if ( takes_netlist )
    app->add_option( "netlist", a.netlist, "AOI netlist file" )->required()->check( CLI::ExistingFile );
  app->add_option( "--lib", a.library, "cell library file (default: built-in sample library)" )->check( CLI::ExistingFile );
  app->add_option( "--config", a.config, "key = value configuration file" )->check( CLI::ExistingFile );
  app->add_option( "--seed", a.seed, "RNG seed, overrides the config file" );
  app->add_option( "--out", a.out, "output / state directory" );
  app->add_option( "--set", a.sets, "key=value override applied after the config file" );
  app->add_flag( "--trace-objective", a.trace, "write objective_trace.csv from global placement" );
  app->add_flag( "--dump-majtable", a.majtable, "write majtable.json" );
  app->add_flag( "--verbose", a.verbose, "per-iteration traces" );
}

aqflow::flow_options to_options( CLI::App const& app, common_args const& a )
{
  aqflow::flow_options o;
  o.netlist_path = a.netlist;
  o.library_path = a.library;
  o.config_path = a.config;
  o.out_dir = a.out;
  if ( app.count( "--seed" ) > 0 )
    o.seed = a.seed;
  for ( auto const& s : a.sets )
  {
    auto const eq = s.find( '=' );
    if ( eq == std::string::npos )
      throw CLI::ValidationError( "--set", "expected key=value, got '" + s + "'" );
    o.overrides.emplace_back( s.substr( 0, eq ), s.substr( eq + 1 ) );
  }
  o.trace_objective = a.trace;
  o.dump_majtable = a.majtable;
  o.verbose = a.verbose;
  o.log = &std::cerr;
  return o;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "aqflow: AQFP synthesis, placement and routing flow" };
  app.require_subcommand( 1 );

  common_args flow_args;
  auto* flow = app.add_subcommand( "flow", "run every stage" );
  add_common( flow, flow_args, true );

  std::vector<std::pair<CLI::App*, common_args>> stages;
  stages.reserve( aqflow::stage_names().size() );
  for ( auto const& name : aqflow::stage_names() )
  {
    stages.emplace_back( app.add_subcommand( name, "run the " + name + " stage on the state directory" ), common_args{} );
    add_common( stages.back().first, stages.back().second, name == "synth" );
  }

  aqflow::bench_params bench;
  std::string bench_out;
  auto* gen = app.add_subcommand( "gen-bench", "generate a random AOI netlist" );
  gen->add_option( "--gates", bench.gates, "gate count" )->capture_default_str();
  gen->add_option( "--inputs", bench.inputs, "primary inputs" )->capture_default_str();
  gen->add_option( "--outputs", bench.outputs, "minimum primary outputs" )->capture_default_str();
  gen->add_option( "--depth", bench.depth, "logic depth (0 picks about 2*sqrt(gates))" )->capture_default_str();
  gen->add_option( "--seed", bench.seed, "RNG seed" )->capture_default_str();
  gen->add_option( "-o,--output", bench_out, "output file (default: stdout)" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e );
    return code == 0 ? 0 : aqflow::exit_input_error;
  }

  try
  {
    if ( flow->parsed() )
      return aqflow::cmd_flow( to_options( *flow, flow_args ) );
    for ( auto const& [sub, args] : stages )
      if ( sub->parsed() )
        return aqflow::cmd_stage( sub->get_name(), to_options( *sub, args ) );
    if ( gen->parsed() )
    {
      auto const text = aqflow::write_netlist( aqflow::generate_benchmark( bench ) );
      if ( bench_out.empty() )
        std::cout << text;
      else
        aqflow::write_file( bench_out, text );
      return aqflow::exit_clean;
    }
  }
  catch ( CLI::ValidationError const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return aqflow::exit_input_error;
  }
  catch ( aqflow::aqflow_error const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return aqflow::exit_input_error;
  }
  return aqflow::exit_internal_error;
}
