#include <cstdlib>
#include <ostream>

#include "viz/gateway.hpp"
#include "viz/io.hpp"

namespace viz::gateway {

int cliRun(const RunOptions& options, std::ostream& log) {
  std::string text;
  try {
    text = readFile(options.script);
  } catch (const IoError& e) {
    log << "error: " << e.what() << "\n";
    return kExitUnreadable;
  }

  lang::EvalContext ctx;
  ctx.scriptDir = options.script.parent_path();
  if (!options.dataDir.empty()) {
    ctx.dataRoot = options.dataDir;
  } else if (const char* env = std::getenv("VIZ_DATA_DIR"); env && *env) {
    ctx.dataRoot = env;
  } else {
    ctx.dataRoot = ctx.scriptDir;
  }
  ctx.strict = options.strict;
  ctx.observer = [&](const lang::EvalResult& r) {
    for (const auto& e : r.events) {
      if (e.kind != lang::EventKind::SnapshotRequested) continue;
      std::size_t w = e.data.at("width").get<std::size_t>();
      std::size_t h = e.data.at("height").get<std::size_t>();
      if (options.size && !e.data.at("explicitSize").get<bool>()) {
        w = static_cast<std::size_t>(options.size->width);
        h = static_cast<std::size_t>(options.size->height);
      }
      std::filesystem::path out = e.data.at("path").get<std::string>();
      if (out.is_relative()) out = options.outDir / out;
      if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
      writeImagePpm(renderComposite(r.session, w, h), out);
      log << "wrote " << out.string() << "\n";
    }
  };

  lang::ScriptResult result;
  try {
    result = lang::runScript(Session{}, text, ctx, options.script.string());
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitRenderFailure;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitRenderFailure;
  }
  for (const auto& e : result.errors) {
    log << (options.strict ? "error: " : "warning: ") << (e.file.empty() ? options.script.string() : e.file) << ":"
        << e.line << ":" << e.column << ": " << e.message << "\n";
  }
  if (options.strict && !result.errors.empty()) return kExitScriptErrors;
  return kExitOk;
}

}  // namespace viz::gateway
