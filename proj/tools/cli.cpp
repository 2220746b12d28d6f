// Copyright 2026 The INAUT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "inaut/engine.hpp"
#include "inaut/french.hpp"
#include "inaut/service.hpp"

namespace inaut::cli {

using nlohmann::json;

namespace {

struct Options {
  std::string kb_path;
  std::string doc_path;
  std::string weights_path;
  std::string closed_lists_path;
  bool json = false;
};

// Failure in the input data (exit 1) as opposed to the invocation (exit 2).
struct DataError : std::runtime_error {
  DataError(std::string code, const std::string &msg) : std::runtime_error(msg), code(std::move(code)) {}
  std::string code;
};

class Reporter {
 public:
  Reporter(std::ostream &err, bool json) : err_(err), json_(json) {}

  void error(const std::string &code, const std::string &message) const {
    if (json_) {
      err_ << json{{"severity", "error"}, {"code", code}, {"message", message}}.dump() << "\n";
    } else {
      err_ << "inaut: error: " << message << "\n";
    }
  }
  void warning(const std::string &message) const {
    if (json_) {
      err_ << json{{"severity", "warning"}, {"code", "Warning"}, {"message", message}}.dump() << "\n";
    } else {
      err_ << "inaut: warning: " << message << "\n";
    }
  }
  void diagnostic(const std::string &file, const std::string &text,
                  const grammar::Diagnostic &d) const {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < d.span.begin && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
    if (json_) {
      json j = grammar::to_json(d);
      j["file"] = file;
      j["line"] = line;
      j["column"] = col;
      err_ << j.dump() << "\n";
      return;
    }
    err_ << file << ":" << line << ":" << col << ": " << d.severity << ": " << d.code << ": "
         << d.message;
    if (!d.hints.empty()) {
      err_ << " (hint: ";
      for (size_t i = 0; i < d.hints.size(); ++i) err_ << (i ? "; " : "") << d.hints[i];
      err_ << ")";
    }
    err_ << "\n";
  }
  void kb_diagnostic(const kb::KbDiagnostic &d) const {
    if (json_) {
      err_ << json{{"severity", "error"}, {"code", d.rule}, {"entity", d.entity}, {"message", d.message}}
                  .dump()
           << "\n";
    } else {
      err_ << "inaut: kb: " << d.rule << ": " << d.entity << ": " << d.message << "\n";
    }
  }

 private:
  std::ostream &err_;
  bool json_;
};

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("ConfigError", "file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string &path, const std::string &text, std::ostream &out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

std::shared_ptr<const kb::KnowledgeBase> load_kb(const Options &o, const Reporter &rep) {
  if (o.kb_path.empty()) throw ConfigError("no knowledge base given (--kb or INAUT_KB_PATH)");
  kb::KnowledgeBase kb;
  try {
    kb = kb::load(read_text(o.kb_path));
  } catch (const Error &e) {
    throw DataError(e.code(), o.kb_path + ": " + e.what());
  }
  const auto diags = kb::validate_kb(kb);
  if (!diags.empty()) {
    for (const auto &d : diags) rep.kb_diagnostic(d);
    throw DataError("InvalidKb", o.kb_path + ": " + std::to_string(diags.size()) + " KB diagnostic(s)");
  }
  return std::make_shared<const kb::KnowledgeBase>(std::move(kb));
}

std::shared_ptr<const doc::DocTree> load_doc(const Options &o, bool required) {
  if (o.doc_path.empty()) {
    if (required) throw ConfigError("no document tree given (--doc or INAUT_DOC_PATH)");
    return nullptr;
  }
  try {
    return std::make_shared<const doc::DocTree>(doc::load_doc_tree(read_text(o.doc_path)));
  } catch (const Error &e) {
    throw DataError(e.code(), o.doc_path + ": " + e.what());
  }
}

nlg::WeightConfig load_weights(const Options &o) {
  return o.weights_path.empty() ? nlg::WeightConfig::defaults()
                                : nlg::WeightConfig::load_file(o.weights_path);
}

grammar::ClosedLists load_lists(const Options &o) {
  if (o.closed_lists_path.empty()) return grammar::ClosedLists::defaults();
  try {
    return grammar::ClosedLists::from_json(json::parse(read_text(o.closed_lists_path)));
  } catch (const json::exception &e) {
    throw ConfigError("closed lists: " + std::string(e.what()));
  } catch (const DataError &e) {
    throw ConfigError(e.what());
  }
}

// Blanks '#' comment lines, keeping byte offsets.
std::string strip_comments(std::string text) {
  size_t i = 0;
  while (i < text.size()) {
    size_t j = i;
    while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
    size_t eol = text.find('\n', i);
    if (eol == std::string::npos) eol = text.size();
    if (j < text.size() && text[j] == '#') {
      for (size_t k = j; k < eol; ++k) text[k] = ' ';
    }
    i = eol + 1;
  }
  return text;
}

std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Generate and validate nautical instructions from a geographic knowledge base", "inaut"};
  app.require_subcommand(1);
  app.add_option("--kb", o.kb_path, "knowledge base JSON")->envname("INAUT_KB_PATH");
  app.add_option("--doc", o.doc_path, "document tree JSON")->envname("INAUT_DOC_PATH");
  app.add_option("--weights", o.weights_path, "generation weights JSON")->envname("INAUT_WEIGHTS_PATH");
  app.add_option("--closed-lists", o.closed_lists_path, "closed word lists JSON")
      ->envname("INAUT_CLOSED_LISTS_PATH");
  app.add_flag("--json", o.json, "diagnostics as one JSON object per line on stderr");

  std::string format = "text", out_path, plan_path, leaf;
  auto *generate = app.add_subcommand("generate", "write the full document of the volume");
  generate->add_option("--format", format, "text, html or json-plan")
      ->check(CLI::IsMember({"text", "html", "json-plan"}));
  generate->add_option("-o,--out", out_path, "output file (default stdout)");
  generate->add_option("--emit-plan", plan_path, "also write the generation plan as JSON");

  auto *plan = app.add_subcommand("plan", "print the generation plan of one leaf");
  plan->add_option("--leaf", leaf, "section id")->required();
  plan->add_option("-o,--out", out_path, "output file (default stdout)");

  std::vector<std::string> files;
  auto *validate = app.add_subcommand("validate", "check INAUT files");
  validate->add_option("files", files, "INAUT text files ('#' starts a comment line)");

  std::string config_path, listen, state_dir;
  auto *serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--config", config_path, "service config JSON")->envname("INAUT_SERVICE_CONFIG");
  serve->add_option("--listen", listen, "host:port");
  serve->add_option("--state-dir", state_dir, "contribution log and snapshots");

  auto *kbcmd = app.add_subcommand("kb", "knowledge base maintenance");
  kbcmd->require_subcommand(1);
  std::string import_path;
  auto *kb_import = kbcmd->add_subcommand("import", "validate a KB file and write it in canonical form");
  kb_import->add_option("file", import_path, "KB JSON")->required();
  kb_import->add_option("-o,--out", out_path, "output file (default stdout)");
  bool dot = false;
  auto *kb_export = kbcmd->add_subcommand("export", "write the --kb knowledge base");
  kb_export->add_option("-o,--out", out_path, "output file (default stdout)");
  kb_export->add_flag("--dot", dot, "graph in Graphviz format instead of JSON");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  const Reporter rep(err, o.json);
  try {
    if (*generate) {
      const auto kb = load_kb(o, rep);
      const auto doc = load_doc(o, true);
      const engine::Engine engine(kb, doc, load_weights(o), load_lists(o));
      write_text(out_path, engine.generate_document(engine::parse_format(format)), out);
      if (!plan_path.empty()) {
        write_text(plan_path, engine.generate_document(engine::Format::kJsonPlan), out);
      }
      return kOk;
    }
    if (*plan) {
      const auto kb = load_kb(o, rep);
      const auto doc = load_doc(o, true);
      const engine::Engine engine(kb, doc, load_weights(o), load_lists(o));
      const auto t = engine.generate_leaf(leaf);
      json j = t.plan.to_json();
      j["litinaut"] = t.litinaut;
      write_text(out_path, j.dump(2) + "\n", out);
      return kOk;
    }
    if (*validate) {
      const auto kb = load_kb(o, rep);
      const grammar::Lexicon lex(*kb, load_lists(o));
      if (files.empty()) {
        rep.warning("no input files");
        return kOk;
      }
      bool ok = true;
      for (const auto &f : files) {
        const std::string text = strip_comments(read_text(f));
        const auto diags = grammar::validate_segment(text, lex);
        for (const auto &d : diags) rep.diagnostic(f, text, d);
        out << f << ": " << grammar::split_sentences(text).size() << " sentence(s), "
            << diags.size() << " diagnostic(s)\n";
        ok = ok && diags.empty();
      }
      return ok ? kOk : kValidationFailure;
    }
    if (*serve) {
      service::ServiceConfig cfg;
      if (!config_path.empty()) cfg = service::ServiceConfig::load_file(config_path);
      cfg.apply_env();
      if (!o.kb_path.empty()) cfg.kb_path = o.kb_path;
      if (!o.doc_path.empty()) cfg.doc_path = o.doc_path;
      if (!o.weights_path.empty()) cfg.weights_path = o.weights_path;
      if (!o.closed_lists_path.empty()) cfg.closed_lists_path = o.closed_lists_path;
      if (!state_dir.empty()) cfg.state_dir = state_dir;
      if (!listen.empty()) {
        json j = {{"listen", listen}};
        const auto parsed = service::ServiceConfig::from_json(j);
        cfg.host = parsed.host;
        cfg.port = parsed.port;
      }
      cfg.validate();
      Options data = o;
      data.kb_path = cfg.kb_path;
      data.doc_path = cfg.doc_path;
      service::Service svc(cfg, load_kb(data, rep), load_doc(data, false));
      service::HttpServer http(svc);
      const int port = http.bind(cfg.host, cfg.port);
      if (port < 0) throw ConfigError("cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
      out << "inaut: listening on " << cfg.host << ":" << port << std::endl;
      g_stop = false;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::thread watcher([&] {
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        http.stop();
      });
      http.listen();
      g_stop = true;
      watcher.join();
      return kOk;
    }
    if (*kb_import) {
      Options imp = o;
      imp.kb_path = import_path;
      write_text(out_path, kb::persist(*load_kb(imp, rep)), out);
      return kOk;
    }
    if (*kb_export) {
      const auto kb = load_kb(o, rep);
      write_text(out_path, dot ? kb::build_kb_graph(*kb).to_dot() : kb::persist(*kb), out);
      return kOk;
    }
  } catch (const DataError &e) {
    rep.error(e.code, e.what());
    return kValidationFailure;
  } catch (const ConfigError &e) {
    rep.error(e.code(), e.what());
    return kConfigError;
  } catch (const Error &e) {
    rep.error(e.code(), e.what());
    return kValidationFailure;
  } catch (const std::exception &e) {
    rep.error("InternalError", e.what());
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace inaut::cli
