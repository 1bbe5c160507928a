#include <aqflow/flow.hpp>

#include <aqflow/balance.hpp>

#include <chrono>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

namespace aqflow
{

std::vector<std::string> const& stage_names()
{
  static std::vector<std::string> const names{ "synth", "balance", "place", "route", "drc" };
  return names;
}

std::uint64_t fnv1a( std::string_view data )
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( auto const c : data )
  {
    h ^= static_cast<unsigned char>( c );
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a_hex( std::string_view data )
{
  char buf[17];
  std::snprintf( buf, sizeof buf, "%016llx", static_cast<unsigned long long>( fnv1a( data ) ) );
  return buf;
}

namespace
{

namespace fs = std::filesystem;

constexpr char const* state_file = "state.json";
constexpr char const* report_file = "flow.report.json";

/* artifact read by each stage, indexed like stage_names() */
constexpr char const* stage_input[] = { "", "maj.netlist.json", "balanced.netlist.json", "placed.json", "routes.json" };

struct context
{
  flow_options opts;
  cell_library lib;
  flow_config cfg;
  json state;
  json report;

  fs::path dir() const { return fs::path( opts.out_dir ); }

  void log( std::string const& line ) const
  {
    if ( opts.log )
      *opts.log << line << '\n';
  }

  void write_artifact( std::string const& name, std::string const& content )
  {
    fs::create_directories( dir() );
    write_file( ( dir() / name ).string(), content );
    state["artifacts"][name] = fnv1a_hex( content );
  }

  std::string read_artifact( std::string const& name ) const
  {
    auto const path = ( dir() / name ).string();
    if ( !fs::exists( path ) )
      throw input_error( "missing prerequisite artifact " + path );
    auto content = read_file( path );
    auto const& artifacts = state.at( "artifacts" );
    if ( !artifacts.contains( name ) || artifacts.at( name ).get<std::string>() != fnv1a_hex( content ) )
      throw input_error( "stale artifact " + path + ": hash " + fnv1a_hex( content ) + " does not match the recorded " +
                         ( artifacts.contains( name ) ? artifacts.at( name ).get<std::string>() : std::string( "(none)" ) ) );
    return content;
  }

  void save( std::string const& stage, double runtime_ms )
  {
    state["stage"] = stage;
    state["runtime_ms"][stage] = runtime_ms;
    write_artifact( report_file, dump( report ) );
    /* state.json is written last and not hashed into itself */
    write_file( ( dir() / state_file ).string(), dump( state ) );
  }
};

json wns_json( timing_report const& t )
{
  return t.wns_ps ? json( std::round( *t.wns_ps * 10.0 ) / 10.0 ) : json( "-" );
}

/* every stage runs on the calling thread, so the cap only has to be well formed */
void check_thread_cap()
{
  auto const* value = std::getenv( "AQFLOW_THREADS" );
  if ( !value || !*value )
    return;
  char* end = nullptr;
  auto const n = std::strtol( value, &end, 10 );
  if ( *end != '\0' || n < 1 )
    throw config_error( std::string( "AQFLOW_THREADS must be a positive integer, got '" ) + value + "'" );
}

void load_inputs( context& ctx, bool fresh )
{
  check_thread_cap();
  auto const& o = ctx.opts;
  std::string lib_text;
  if ( fresh )
  {
    ctx.state = json::object();
    ctx.state["artifacts"] = json::object();
    ctx.state["library"] = o.library_path;
    flow_config cfg;
    if ( !o.config_path.empty() )
      cfg = parse_config( read_file( o.config_path ) );
    for ( auto const& [k, v] : o.overrides )
      if ( !set_config_value( cfg, k, v ) )
        throw config_error( "unknown key '" + k + "'" );
    if ( o.seed )
      cfg.rng_seed = *o.seed;
    cfg.validate();
    ctx.cfg = cfg;
    ctx.state["config"] = write_config( cfg );
  }
  else
  {
    auto const path = ( ctx.dir() / state_file ).string();
    if ( !fs::exists( path ) )
      throw input_error( "no flow state in " + ctx.opts.out_dir + "; run synth first" );
    ctx.state = json::parse( read_file( path ) );
    ctx.cfg = parse_config( ctx.state.at( "config" ).get<std::string>() );
    if ( o.seed )
      ctx.cfg.rng_seed = *o.seed;
    auto const report_path = ( ctx.dir() / report_file ).string();
    ctx.report = fs::exists( report_path ) ? json::parse( ctx.read_artifact( report_file ) ) : json::object();
  }
  auto const lib_path = ctx.state.at( "library" ).get<std::string>();
  if ( lib_path.empty() )
  {
    ctx.lib = sample_library();
    lib_text = write_cell_library( ctx.lib );
  }
  else
  {
    lib_text = read_file( lib_path );
    ctx.lib = parse_cell_library( lib_text );
  }
  if ( fresh )
  {
    ctx.state["library_hash"] = fnv1a_hex( lib_text );
  }
  else if ( ctx.state.at( "library_hash" ).get<std::string>() != fnv1a_hex( lib_text ) )
  {
    throw input_error( "stale library " + lib_path + ": contents changed since synth" );
  }
}

bool equivalent( netlist const& a, netlist const& b, std::uint64_t seed )
{
  if ( a.inputs.size() != b.inputs.size() || a.outputs.size() != b.outputs.size() )
    return false;
  if ( a.inputs.size() <= 16 )
    return simulate_exhaustive( a ) == simulate_exhaustive( b );
  std::mt19937_64 rng( seed );
  std::vector<std::vector<std::uint64_t>> words( a.inputs.size(), std::vector<std::uint64_t>( 16 ) );
  for ( auto& w : words )
    for ( auto& v : w )
      v = rng();
  return simulate( a, words ) == simulate( b, words );
}

void require_valid( std::string const& stage, netlist const& ntk, validate_params const& ps )
{
  auto const v = validate_netlist( ntk, ps );
  if ( !v.empty() )
    throw flow_error( stage, "netlist invalid after stage: " + v.front().message + " (" + std::to_string( v.size() ) + " violation(s))" );
}

placement resolve_kinds( placement pl, cell_library const& lib )
{
  for ( auto& k : pl.kinds )
    k = lib.at( k.name );
  return pl;
}

/* stages */

netlist stage_synth( context& ctx, netlist const& aoi )
{
  validate_params loose;
  loose.single_fanout = false;
  loose.balanced = false;
  auto const v = validate_netlist( aoi, loose );
  if ( !v.empty() )
    throw input_error( "input netlist: " + v.front().message );

  auto const table = build_mapping_table( mapping_costs::from_library( ctx.lib ) );
  if ( ctx.opts.dump_majtable )
    ctx.write_artifact( "majtable.json", dump( mapping_table_to_json( table ) ) );
  convert_stats cs;
  auto maj = convert_to_majority( aoi, table, &cs );
  require_valid( "synth", maj, loose );
  if ( !equivalent( aoi, maj, ctx.cfg.rng_seed ) )
    throw flow_error( "synth", "majority netlist is not equivalent to the input" );

  auto const st = jj_and_net_stats( maj, ctx.lib );
  ctx.report["model"] = aoi.model;
  ctx.report["synthesis"] = { { "aoi_gates", aoi.gates.size() }, { "gates", maj.gates.size() }, { "jj", st.jj_count }, { "nets", st.net_count },
                              { "depth", cs.final_depth }, { "cuts", cs.cuts },  { "accepted_cuts", cs.accepted } };
  ctx.write_artifact( "maj.netlist.json", dump( netlist_to_json( maj ) ) );
  ctx.log( "[synth] gates=" + std::to_string( maj.gates.size() ) + " jj=" + std::to_string( st.jj_count ) + " depth=" + std::to_string( cs.final_depth ) +
           " cuts=" + std::to_string( cs.accepted ) + "/" + std::to_string( cs.cuts ) );
  return maj;
}

netlist stage_balance( context& ctx, netlist const& maj )
{
  splitter_stats ss;
  buffer_stats bs;
  auto split = insert_splitters( maj, ctx.lib, &ss );
  auto balanced = insert_buffers( split, {}, &bs );
  require_valid( "balance", balanced, {} );
  auto const st = jj_and_net_stats( balanced, ctx.lib );
  ctx.report["balance"] = { { "jj", st.jj_count }, { "nets", st.net_count }, { "depth", st.depth }, { "splitters", ss.splitters }, { "buffers", bs.buffers } };
  ctx.write_artifact( "balanced.netlist.json", dump( netlist_to_json( balanced ) ) );
  ctx.log( "[balance] jj=" + std::to_string( st.jj_count ) + " nets=" + std::to_string( st.net_count ) + " depth=" + std::to_string( st.depth ) +
           " splitters=" + std::to_string( ss.splitters ) + " buffers=" + std::to_string( bs.buffers ) );
  return balanced;
}

void stage_place( context& ctx, netlist& ntk, placement& pl )
{
  global_place_stats gs;
  try
  {
    pl = global_place( ntk, ctx.lib, ctx.cfg, &gs );
  }
  catch ( divergence_error const& e )
  {
    throw flow_error( "place", e.what() );
  }
  if ( ctx.opts.verbose )
  {
    for ( auto const& t : gs.trace )
      ctx.log( "  global it=" + std::to_string( t.iteration ) + " objective=" + std::to_string( t.objective ) + " gamma=" + std::to_string( t.gamma ) );
  }
  if ( ctx.opts.trace_objective )
  {
    std::ostringstream csv;
    csv << "iteration,objective,gamma,step,hpwl\n";
    for ( auto const& t : gs.trace )
      csv << t.iteration << ',' << t.objective << ',' << t.gamma << ',' << t.step << ',' << t.hpwl << '\n';
    ctx.write_artifact( "objective_trace.csv", csv.str() );
  }
  legalize_stats ls;
  pl = legalize( pl, ntk, ctx.cfg, &ls );
  detailed_stats ds;
  pl = detailed_place( pl, ntk, ctx.cfg, detailed_defaults( ctx.cfg ), &ds );
  buffer_row_stats bs;
  try
  {
    insert_buffer_rows( pl, ntk, ctx.lib, ctx.cfg, &bs );
  }
  catch ( aqflow_error const& e )
  {
    throw flow_error( "place", e.what() );
  }
  require_valid( "place", ntk, {} );
  auto const errors = legality_errors( pl, ntk, ctx.cfg );
  if ( !errors.empty() )
    throw flow_error( "place", "illegal placement: " + errors.front() );

  auto const timing = analyze_timing( pl, ntk, ctx.cfg );
  ctx.report["placement"] = { { "hpwl", hpwl( pl, ntk ) },
                              { "buffer_rows", bs.rows_added },
                              { "buffers", bs.buffers_added },
                              { "wns_ps", wns_json( timing ) },
                              { "layer_width", pl.layer_width },
                              { "overflow", pl.overflow },
                              { "legalization_displacement", ls.displacement },
                              { "detailed_moves", ds.accepted } };
  json placed;
  placed["netlist"] = netlist_to_json( ntk );
  placed["placement"] = placement_to_json( pl );
  ctx.write_artifact( "placed.json", dump( placed ) );
  ctx.log( "[place] hpwl=" + std::to_string( hpwl( pl, ntk ) ) + " buffer_rows=" + std::to_string( bs.rows_added ) +
           " width=" + std::to_string( pl.layer_width ) + " moves=" + std::to_string( ds.accepted ) );
}

route_db stage_route( context& ctx, netlist const& ntk, placement& pl )
{
  route_db db;
  try
  {
    db = route_all( pl, ntk, ctx.cfg );
  }
  catch ( unroutable_error const& e )
  {
    json cm;
    cm["gap"] = e.gap;
    cm["map"] = e.congestion;
    ctx.write_artifact( "congestion.json", dump( cm ) );
    throw flow_error( "route", e.what() );
  }
  auto const st = jj_and_net_stats( ntk, ctx.lib );
  auto const timing = analyze_timing( [&] {
    std::vector<double> l;
    for ( auto const& r : db.nets )
      l.push_back( static_cast<double>( r.length ) );
    return l;
  }(), ctx.cfg );
  ctx.report["routing"] = { { "jj", st.jj_count },
                            { "nets", st.net_count },
                            { "routed_wl", db.total_length },
                            { "expansions", db.total_expansions() },
                            { "wns_ps", wns_json( timing ) } };
  json routed;
  routed["routes"] = routes_to_json( db );
  routed["placement"] = placement_to_json( pl );
  routed["netlist"] = netlist_to_json( ntk );
  ctx.write_artifact( "routes.json", dump( routed ) );
  ctx.log( "[route] routed_wl=" + std::to_string( db.total_length ) + " expansions=" + std::to_string( db.total_expansions() ) );
  return db;
}

int stage_drc( context& ctx, netlist& ntk, placement& pl, route_db& db )
{
  auto lay = generate_layout( pl, ntk, db, ctx.cfg );
  auto violations = run_drc( lay, ctx.cfg );
  int iterations = 0;
  std::size_t rows = 0;
  if ( !violations.empty() )
  {
    auto res = repair( lay, violations, pl, ntk, db, ctx.lib, ctx.cfg );
    lay = std::move( res.result );
    violations = std::move( res.unrepaired );
    iterations = res.iterations;
    rows = res.buffer_rows_added;
  }
  ctx.report["drc"] = { { "clean", violations.empty() }, { "violations", violations.size() }, { "repair_iterations", iterations },
                        { "repair_buffer_rows", rows } };
  if ( iterations > 0 )
  {
    auto const st = jj_and_net_stats( ntk, ctx.lib );
    ctx.report["routing"]["jj"] = st.jj_count;
    ctx.report["routing"]["nets"] = st.net_count;
    ctx.report["routing"]["routed_wl"] = db.total_length;
  }
  ctx.write_artifact( "design.layout.json", dump( layout_to_json( lay ) ) );
  ctx.write_artifact( "design.svg", write_layout_svg( lay ) );
  ctx.write_artifact( "drc.report.json", dump( drc_to_json( violations ) ) );
  ctx.log( "[drc] violations=" + std::to_string( violations.size() ) + " repair_iterations=" + std::to_string( iterations ) );
  return violations.empty() ? exit_clean : exit_drc_unclean;
}

/* runs f, timing it and translating failures into exit codes */
int guarded( context& ctx, std::function<int()> const& f )
{
  try
  {
    return f();
  }
  catch ( parse_error const& e )
  {
    ctx.log( std::string( "error: parse: " ) + e.what() );
    return exit_input_error;
  }
  catch ( config_error const& e )
  {
    ctx.log( std::string( "error: config: " ) + e.what() );
    return exit_input_error;
  }
  catch ( input_error const& e )
  {
    ctx.log( std::string( "error: input: " ) + e.what() );
    return exit_input_error;
  }
  catch ( flow_error const& e )
  {
    ctx.log( std::string( "error: " ) + e.what() );
    return exit_internal_error;
  }
  catch ( std::exception const& e )
  {
    ctx.log( std::string( "error: internal: " ) + e.what() );
    return exit_internal_error;
  }
}

template<typename F>
auto run_timed( std::string const& stage, double& ms, F&& f )
{
  auto const start = std::chrono::steady_clock::now();
  auto finish = [&] { ms = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count(); };
  try
  {
    if constexpr ( std::is_void_v<decltype( f() )> )
    {
      f();
      finish();
    }
    else
    {
      auto r = f();
      finish();
      return r;
    }
  }
  catch ( parse_error const& )
  {
    throw;
  }
  catch ( config_error const& )
  {
    throw;
  }
  catch ( input_error const& )
  {
    throw;
  }
  catch ( flow_error const& )
  {
    throw;
  }
  catch ( std::exception const& e )
  {
    throw flow_error( stage, e.what() );
  }
}

netlist read_input_netlist( std::string const& path )
{
  if ( path.empty() )
    throw input_error( "no netlist given" );
  return parse_netlist( read_file( path ) );
}

} // namespace

int cmd_flow( flow_options const& opts )
{
  context ctx;
  ctx.opts = opts;
  return guarded( ctx, [&] {
    load_inputs( ctx, true );
    auto const aoi = read_input_netlist( opts.netlist_path );
    ctx.report = json::object();
    double ms = 0;
    auto maj = run_timed( "synth", ms, [&] { return stage_synth( ctx, aoi ); } );
    ctx.save( "synth", ms );
    auto ntk = run_timed( "balance", ms, [&] { return stage_balance( ctx, maj ); } );
    ctx.save( "balance", ms );
    placement pl;
    run_timed( "place", ms, [&] { stage_place( ctx, ntk, pl ); } );
    ctx.save( "place", ms );
    auto db = run_timed( "route", ms, [&] { return stage_route( ctx, ntk, pl ); } );
    ctx.save( "route", ms );
    auto const code = run_timed( "drc", ms, [&] { return stage_drc( ctx, ntk, pl, db ); } );
    ctx.save( "drc", ms );
    return code;
  } );
}

int cmd_stage( std::string const& stage, flow_options const& opts )
{
  context ctx;
  ctx.opts = opts;
  auto const& names = stage_names();
  auto const it = std::find( names.begin(), names.end(), stage );
  if ( it == names.end() )
  {
    ctx.log( "error: unknown stage " + stage );
    return exit_input_error;
  }
  auto const index = static_cast<std::size_t>( it - names.begin() );
  return guarded( ctx, [&] {
    double ms = 0;
    if ( index == 0 )
    {
      load_inputs( ctx, true );
      auto const aoi = read_input_netlist( opts.netlist_path );
      ctx.report = json::object();
      run_timed( stage, ms, [&] { return stage_synth( ctx, aoi ); } );
      ctx.save( stage, ms );
      return int{ exit_clean };
    }
    load_inputs( ctx, false );
    auto const reached = std::find( names.begin(), names.end(), ctx.state.at( "stage" ).get<std::string>() ) - names.begin();
    if ( reached < static_cast<std::ptrdiff_t>( index ) - 1 )
      throw input_error( "stage " + stage + " needs " + names[index - 1] + " first (state is at " + ctx.state.at( "stage" ).get<std::string>() + ")" );
    auto const input = json::parse( ctx.read_artifact( stage_input[index] ) );
    int code = exit_clean;
    if ( stage == "balance" )
    {
      auto const maj = netlist_from_json( input );
      run_timed( stage, ms, [&] { return stage_balance( ctx, maj ); } );
    }
    else if ( stage == "place" )
    {
      auto ntk = netlist_from_json( input );
      placement pl;
      run_timed( stage, ms, [&] { stage_place( ctx, ntk, pl ); } );
    }
    else if ( stage == "route" )
    {
      auto const ntk = netlist_from_json( input.at( "netlist" ) );
      auto pl = resolve_kinds( placement_from_json( input.at( "placement" ) ), ctx.lib );
      run_timed( stage, ms, [&] { return stage_route( ctx, ntk, pl ); } );
    }
    else
    {
      auto ntk = netlist_from_json( input.at( "netlist" ) );
      auto pl = resolve_kinds( placement_from_json( input.at( "placement" ) ), ctx.lib );
      auto db = routes_from_json( input.at( "routes" ) );
      code = run_timed( stage, ms, [&] { return stage_drc( ctx, ntk, pl, db ); } );
    }
    ctx.save( stage, ms );
    return code;
  } );
}

/* benchmark generation */

netlist generate_benchmark( bench_params const& ps )
{
  if ( ps.gates < 1 || ps.inputs < 1 || ps.outputs < 0 )
    throw input_error( "gen-bench needs gates >= 1, inputs >= 1 and outputs >= 0" );
  if ( ps.depth > ps.gates )
    throw input_error( "gen-bench: depth " + std::to_string( ps.depth ) + " exceeds gate count " + std::to_string( ps.gates ) );
  if ( ps.inputs > 2 * ps.gates )
    throw input_error( "gen-bench: " + std::to_string( ps.inputs ) + " inputs cannot all be used by " + std::to_string( ps.gates ) + " gates" );
  if ( ps.outputs > ps.gates )
    throw input_error( "gen-bench: more outputs than gates" );

  std::mt19937_64 rng( ps.seed );
  auto const draw = [&]( std::uint64_t n ) { return bounded_draw( rng, n ); };
  int const depth = ps.depth > 0 ? ps.depth
                                 : std::clamp( static_cast<int>( std::lround( 2.0 * std::sqrt( static_cast<double>( ps.gates ) ) ) ), 1, ps.gates );

  /* levels: the first `depth` gates pin one gate per level */
  std::vector<int> level( static_cast<std::size_t>( ps.gates ) );
  for ( int g = 0; g < ps.gates; ++g )
    level[g] = g < depth ? g + 1 : 1 + static_cast<int>( draw( static_cast<std::uint64_t>( depth ) ) );
  std::sort( level.begin(), level.end() );

  static constexpr std::pair<gate_type, int> weights[] = { { gate_type::and2, 25 }, { gate_type::or2, 25 },  { gate_type::nand2, 12 },
                                                           { gate_type::nor2, 12 }, { gate_type::xor2, 8 },  { gate_type::xnor2, 6 },
                                                           { gate_type::inv, 8 },   { gate_type::buf, 4 } };
  auto const pick_type = [&] {
    auto r = static_cast<int>( draw( 100 ) );
    for ( auto const& [t, w] : weights )
    {
      if ( r < w )
        return t;
      r -= w;
    }
    return gate_type::and2;
  };

  /* signals by level: level 0 = inputs (ids 0..inputs-1), gate g = inputs + g */
  std::vector<std::vector<int>> at_level( static_cast<std::size_t>( depth + 1 ) );
  for ( int i = 0; i < ps.inputs; ++i )
    at_level[0].push_back( i );
  std::vector<gate_type> types( static_cast<std::size_t>( ps.gates ) );
  std::vector<std::vector<int>> fanin( static_cast<std::size_t>( ps.gates ) );
  std::vector<int> below;
  int current = 0;
  for ( int g = 0; g < ps.gates; ++g )
  {
    while ( current < level[g] - 1 )
    {
      ++current;
      below.insert( below.end(), at_level[current - 1].begin(), at_level[current - 1].end() );
    }
    if ( current == level[g] - 1 && below.size() < static_cast<std::size_t>( ps.inputs ) )
      below = at_level[0];
    auto const& prev = at_level[level[g] - 1];
    types[g] = pick_type();
    int const arity = gate_arity( types[g] );
    fanin[g].push_back( prev[draw( prev.size() )] );
    std::vector<int> pool = below;
    pool.insert( pool.end(), prev.begin(), prev.end() );
    bool const has_other = std::any_of( pool.begin(), pool.end(), [&]( int s ) { return s != fanin[g][0]; } );
    for ( int k = 1; k < arity; ++k )
    {
      int s;
      do
      {
        s = draw( 100 ) < 60 ? prev[draw( prev.size() )] : pool[draw( pool.size() )];
      } while ( s == fanin[g][0] && has_other );
      fanin[g].push_back( s );
    }
    at_level[level[g]].push_back( ps.inputs + g );
  }

  /* make every input used: take over the last fanin of a gate, widening NOT/BUF to AND */
  std::vector<int> uses( static_cast<std::size_t>( ps.inputs + ps.gates ), 0 );
  for ( auto const& f : fanin )
    for ( auto const s : f )
      ++uses[s];
  for ( int i = 0; i < ps.inputs; ++i )
  {
    if ( uses[i] > 0 )
      continue;
    /* random starting gate, then a full scan so a connectable slot is always found if one exists */
    auto const start = static_cast<std::size_t>( draw( static_cast<std::uint64_t>( ps.gates ) ) );
    for ( std::size_t j = 0; j < static_cast<std::size_t>( ps.gates ) && uses[i] == 0; ++j )
    {
      auto const g = ( start + j ) % static_cast<std::size_t>( ps.gates );
      if ( gate_arity( types[g] ) == 1 )
      {
        types[g] = gate_type::and2;
        fanin[g].push_back( i );
        ++uses[i];
        break;
      }
      for ( auto p = fanin[g].size(); p-- > 0; )
      {
        auto& victim = fanin[g][p];
        if ( victim < ps.inputs && uses[victim] <= 1 )
          continue;
        --uses[victim];
        victim = i;
        ++uses[i];
        break;
      }
    }
    if ( uses[i] == 0 )
      throw input_error( "gen-bench could not connect input " + std::to_string( i ) );
  }

  netlist ntk;
  ntk.model = "bench_" + std::to_string( ps.gates ) + "_" + std::to_string( ps.seed );
  for ( int i = 0; i < ps.inputs; ++i )
    ntk.add_input( "pi" + std::to_string( i ) );
  for ( int g = 0; g < ps.gates; ++g )
    ntk.add_net( "g" + std::to_string( g ) );
  for ( int g = 0; g < ps.gates; ++g )
  {
    std::vector<net_id> in;
    for ( auto const s : fanin[g] )
      in.push_back( static_cast<net_id>( s ) );
    ntk.add_gate( types[g], in, { static_cast<net_id>( ps.inputs + g ) } );
  }
  std::vector<bool> is_output( static_cast<std::size_t>( ps.gates ), false );
  int count = 0;
  for ( int g = 0; g < ps.gates; ++g )
  {
    if ( uses[ps.inputs + g] == 0 )
    {
      is_output[g] = true;
      ++count;
    }
  }
  for ( int g = ps.gates - 1; g >= 0 && count < ps.outputs; --g )
  {
    if ( !is_output[g] )
    {
      is_output[g] = true;
      ++count;
    }
  }
  for ( int g = 0; g < ps.gates; ++g )
    if ( is_output[g] )
      ntk.add_output( "g" + std::to_string( g ), static_cast<net_id>( ps.inputs + g ) );
  return ntk;
}

} // namespace aqflow
