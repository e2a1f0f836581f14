#include <csignal>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "viz/gateway.hpp"
#include "viz/io.hpp"

namespace {

viz::gateway::Server* g_server = nullptr;

void onSignal(int) {
  if (g_server) g_server->stop();
}

std::optional<viz::lang::PixelSize> parseSize(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) return std::nullopt;
  try {
    std::size_t a = 0, b = 0;
    const long w = std::stol(text.substr(0, x), &a);
    const long h = std::stol(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1 || w < 1 || h < 1) return std::nullopt;
    return viz::lang::PixelSize{w, h};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiview visualization of 3D/4D scalar lattice fields"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Evaluate a .vl script and write its snapshots");
  std::string script, outDir = ".", size, runData;
  bool headless = true, strict = false;
  run->add_option("script", script, "Script file")->required();
  run->add_flag("--headless", headless, "Render off-screen (the only mode)");
  run->add_option("--out", outDir, "Directory for snapshot images");
  run->add_option("--size", size, "Snapshot size WxH when the script gives none");
  run->add_flag("--strict", strict, "Stop at the first failing line and exit 1");
  run->add_option("--data", runData, "Root for relative load paths");

  auto* serve = app.add_subcommand("serve", "Serve one live session over WebSocket at /session");
  unsigned short port = 8080;
  std::string host = "127.0.0.1", serveData, staticDir;
  serve->add_option("--port", port, "TCP port (0 picks one)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--data", serveData, "Root for relative load paths");
  serve->add_option("--static", staticDir, "Directory served at /");

  auto* import = app.add_subcommand("import", "Convert a headerless raw volume to NDVF");
  std::string raw, dtype = "f32", order = "xfastest", outFile, storage = "f64";
  std::vector<std::size_t> dims;
  std::vector<double> spacing;
  import->add_option("raw", raw, "Raw input file")->required();
  import->add_option("--dims", dims, "Extents, x first")->required()->delimiter(',');
  import->add_option("--dtype", dtype, "u8|u16|i16|f32|f64");
  import->add_option("--spacing", spacing, "Voxel spacing per axis")->delimiter(',');
  import->add_option("--order", order, "xfastest|xslowest");
  import->add_option("--out", outFile, "Output .ndvf file")->required();
  import->add_option("--storage", storage, "Stored value type f32|f64");

  CLI11_PARSE(app, argc, argv);

  const char* envData = std::getenv("VIZ_DATA_DIR");
  try {
    if (*run) {
      viz::gateway::RunOptions opts;
      opts.script = script;
      opts.outDir = outDir;
      opts.strict = strict;
      opts.dataDir = runData;
      if (!size.empty()) {
        opts.size = parseSize(size);
        if (!opts.size) {
          std::cerr << "error: --size expects WIDTHxHEIGHT\n";
          return 2;
        }
      }
      return viz::gateway::cliRun(opts, std::cerr);
    }
    if (*serve) {
      viz::gateway::ServeOptions opts;
      opts.address = host;
      opts.port = port;
      opts.dataDir = !serveData.empty() ? serveData : envData ? envData : ".";
      opts.staticDir = staticDir;
      viz::gateway::Server server(opts);
      g_server = &server;
      std::signal(SIGINT, onSignal);
      std::signal(SIGTERM, onSignal);
      std::cerr << "serving on http://" << host << ":" << server.port() << "/ (session at /session)\n";
      server.run();
      g_server = nullptr;
      return 0;
    }
    if (*import) {
      viz::RawImportSpec spec;
      spec.dims = dims;
      spec.type = viz::rawTypeFromName(dtype);
      spec.order = viz::rawOrderFromName(order);
      spec.spacing = spacing;
      const auto field = viz::importRaw(raw, spec);
      viz::Dtype st = viz::Dtype::F64;
      if (storage == "f32") st = viz::Dtype::F32;
      else if (storage != "f64") throw viz::ArgumentError("--storage expects f32 or f64");
      viz::saveField(field, outFile, st);
      std::cerr << "wrote " << outFile << "\n";
      return 0;
    }
  } catch (const viz::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
