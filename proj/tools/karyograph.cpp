// karyograph command-line front end: parse, validate and query ISCN
// short-system karyotypes against a band atlas, and export the model as an
// OWL functional-syntax document.
//
// Exit codes: 0 success, 1 domain error (parse/validation/query failure),
// 2 usage or I/O error. Payload goes to stdout, diagnostics to stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "desk_atlas_data.hpp"
#include "karyograph/band_atlas.hpp"
#include "karyograph/iscn_parser.hpp"
#include "karyograph/karyotype_model.hpp"
#include "karyograph/name_codec.hpp"
#include "karyograph/ontology_export.hpp"
#include "karyograph/query_engine.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageFailure {
  std::string message;
};

karyograph::BandAtlas load_atlas(const std::string& path) {
  if (path.empty()) {
    return karyograph::BandAtlas::load_string(karyograph::tools::kBundledDeskAtlas);
  }
  std::ifstream in(path);
  if (!in) {
    throw UsageFailure{"cannot open atlas file: " + path};
  }
  return karyograph::BandAtlas::load(in);
}

std::ifstream open_or_usage_error(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) {
    throw UsageFailure{"cannot open " + what + " file: " + path};
  }
  return in;
}

void print_diagnostics(const std::string& source,
                       const std::vector<karyograph::ParseDiagnostic>& diagnostics) {
  for (const karyograph::ParseDiagnostic& d : diagnostics) {
    std::cerr << source << ": " << d.message << "\n";
  }
}

std::string json_escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

std::string event_to_json(const karyograph::AbnormalityEvent& event) {
  using karyograph::EventOrigin;
  std::string out = "{\"kind\":\"" + karyograph::event_kind_name(event.kind) + "\"";
  out += ",\"multiplicity\":" + std::to_string(event.multiplicity);
  if (event.target) {
    out += ",\"target\":\"" + event.target->label() + "\"";
  }
  out += ",\"breakpoints\":[";
  for (std::size_t i = 0; i < event.breakpoints.size(); ++i) {
    if (i > 0) out += ',';
    out += "\"" + event.breakpoints[i].text() + "\"";
  }
  out += "]";
  if (event.deletion_style) {
    out += ",\"style\":\"";
    out += *event.deletion_style == karyograph::DeletionStyle::Terminal ? "terminal"
                                                                        : "interstitial";
    out += "\"";
  }
  out += ",\"origin\":\"";
  out += event.origin == EventOrigin::Inferred ? "inferred" : "explicit";
  out += "\"}";
  return out;
}

void print_karyotype_text(const karyograph::Karyotype& k) {
  std::cout << "source: " << k.source_text << "\n";
  std::cout << "base: " << karyograph::base_label(k.base) << "\n";
  std::cout << "sex: " << karyograph::sex_label(karyograph::classify_sex(k)) << "\n";
  std::cout << "count: " << karyograph::chromosome_count(k) << "\n";
  std::cout << "events: " << k.events.size() << "\n";
  int index = 0;
  for (const karyograph::AbnormalityEvent& event : k.events) {
    std::cout << "  " << ++index << ": " << karyograph::event_kind_name(event.kind);
    if (event.target) std::cout << " chromosome=" << event.target->label();
    if (!event.breakpoints.empty()) {
      std::cout << " breakpoints=";
      for (std::size_t i = 0; i < event.breakpoints.size(); ++i) {
        if (i > 0) std::cout << ',';
        std::cout << event.breakpoints[i].text();
      }
    }
    if (event.deletion_style) {
      std::cout << " style="
                << (*event.deletion_style == karyograph::DeletionStyle::Terminal
                        ? "terminal"
                        : "interstitial");
    }
    std::cout << " multiplicity=" << event.multiplicity;
    if (event.origin == karyograph::EventOrigin::Inferred) std::cout << " origin=inferred";
    std::cout << "\n";
  }
}

void print_karyotype_json(const karyograph::Karyotype& k) {
  std::cout << "{\"source\":\"" << json_escape(k.source_text) << "\""
            << ",\"base\":\"" << karyograph::base_label(k.base) << "\""
            << ",\"sex\":\"" << karyograph::sex_label(karyograph::classify_sex(k)) << "\""
            << ",\"count\":" << karyograph::chromosome_count(k) << ",\"events\":[";
  for (std::size_t i = 0; i < k.events.size(); ++i) {
    if (i > 0) std::cout << ',';
    std::cout << event_to_json(k.events[i]);
  }
  std::cout << "]}" << "\n";
}

std::vector<std::string> gather_lines(const std::vector<std::string>& args) {
  if (!args.empty()) return args;
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ISCN short-system karyotype toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string atlas_path;
  std::string corpus_path;
  app.add_option("--atlas", atlas_path, "Band atlas file (default: bundled desk atlas)");
  app.add_option("--corpus", corpus_path, "Corpus file: one ISCN string per line");

  std::string iscn_arg;
  std::string band_arg;
  std::string out_path;
  std::string query_chrom;
  std::string query_band;
  std::vector<std::string> codec_args;
  bool json_output = false;

  CLI::App* cmd_parse = app.add_subcommand("parse", "Parse one ISCN string");
  cmd_parse->add_option("string", iscn_arg, "ISCN karyotype string")->required();
  cmd_parse->add_flag("--json", json_output, "Emit a JSON object instead of key-value text");

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Check every corpus entry; one OK/ERROR line each");

  CLI::App* cmd_sex = app.add_subcommand("sex", "Classify the sex of one karyotype");
  cmd_sex->add_option("string", iscn_arg, "ISCN karyotype string")->required();

  CLI::App* cmd_copy =
      app.add_subcommand("copy-number", "Report baseline and observed copies of a band");
  cmd_copy->add_option("string", iscn_arg, "ISCN karyotype string")->required();
  cmd_copy->add_option("band", band_arg, "band, e.g. 1q42.1")->required();

  CLI::App* cmd_query = app.add_subcommand("query", "Run one of the corpus queries");
  cmd_query->require_subcommand(1);
  CLI::App* q_abnormal =
      cmd_query->add_subcommand("abnormal-in", "Entries with an abnormality in a chromosome");
  q_abnormal->add_option("chromosome", query_chrom, "chromosome 1-22, X or Y")->required();
  CLI::App* q_gain =
      cmd_query->add_subcommand("copy-gain", "Entries increasing the copy number of a band");
  q_gain->add_option("band", query_band, "band, e.g. 1q42.2")->required();
  CLI::App* q_affects =
      cmd_query->add_subcommand("affects", "Entries affecting a band in any way");
  q_affects->add_option("band", query_band, "band, e.g. 2q31")->required();

  CLI::App* cmd_mangle =
      app.add_subcommand("mangle", "ISCN strings to safe names (args or stdin lines)");
  cmd_mangle->add_option("strings", codec_args, "ISCN strings");
  CLI::App* cmd_demangle =
      app.add_subcommand("demangle", "Safe names back to ISCN strings (args or stdin lines)");
  cmd_demangle->add_option("names", codec_args, "safe names");

  CLI::App* cmd_export = app.add_subcommand("export-owl", "Write the OWL document");
  cmd_export->add_option("--out", out_path, "output file (.ofn)")->required();

  CLI::App* cmd_atlas = app.add_subcommand("atlas", "Atlas statistics and class projection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    karyograph::BandAtlas atlas = [&] {
      try {
        return load_atlas(atlas_path);
      } catch (const karyograph::AtlasError&) {
        throw;  // invalid atlas content is a domain error
      }
    }();

    if (cmd_parse->parsed() || cmd_sex->parsed() || cmd_copy->parsed()) {
      karyograph::ParseResult result = karyograph::parse_karyotype(iscn_arg, atlas);
      if (!result.ok()) {
        print_diagnostics(iscn_arg, result.diagnostics);
        return kExitDomain;
      }
      const karyograph::Karyotype& k = *result.karyotype;
      if (cmd_sex->parsed()) {
        std::cout << karyograph::sex_label(karyograph::classify_sex(k)) << "\n";
      } else if (cmd_copy->parsed()) {
        karyograph::BandAddress band = karyograph::parse_band(band_arg);
        karyograph::CopyNumberReport report = karyograph::copy_number(k, band, atlas);
        std::cout << "band=" << report.band.text() << " baseline=" << report.baseline
                  << " observed=" << report.observed << "\n";
      } else if (json_output) {
        print_karyotype_json(k);
      } else {
        print_karyotype_text(k);
      }
      return kExitOk;
    }

    if (cmd_validate->parsed()) {
      if (corpus_path.empty()) throw UsageFailure{"--corpus is required"};
      std::ifstream in = open_or_usage_error(corpus_path, "corpus");
      karyograph::CorpusLoadReport report = karyograph::read_corpus(in, atlas);
      bool all_ok = report.all_ok();
      for (const auto& line : report.lines) {
        if (line.result.ok()) {
          std::cout << line.name.text << " OK\n";
        } else {
          std::cout << line.name.text << " ERROR " << line.result.diagnostics.front().message
                    << "\n";
        }
      }
      for (const std::string& name : report.duplicate_names) {
        std::cout << name << " ERROR duplicate entry\n";
      }
      return all_ok ? kExitOk : kExitDomain;
    }

    if (cmd_query->parsed()) {
      if (corpus_path.empty()) throw UsageFailure{"--corpus is required"};
      std::ifstream in = open_or_usage_error(corpus_path, "corpus");
      karyograph::Corpus corpus = karyograph::Corpus::load(in, atlas);
      std::vector<karyograph::SafeName> names;
      if (q_abnormal->parsed()) {
        auto chrom = karyograph::ChromosomeId::parse(query_chrom);
        if (!chrom || chrom->is_unknown_sex()) {
          throw UsageFailure{"invalid chromosome: " + query_chrom};
        }
        names = karyograph::query_abnormal_in(corpus, *chrom, atlas);
      } else {
        karyograph::BandAddress band = karyograph::parse_band(query_band);
        names = q_gain->parsed() ? karyograph::query_copy_gain(corpus, band, atlas)
                                 : karyograph::query_affects(corpus, band, atlas);
      }
      for (const karyograph::SafeName& name : names) std::cout << name.text << "\n";
      return kExitOk;
    }

    if (cmd_mangle->parsed()) {
      for (const std::string& line : gather_lines(codec_args)) {
        std::cout << karyograph::mangle(line).text << "\n";
      }
      return kExitOk;
    }

    if (cmd_demangle->parsed()) {
      bool any_failed = false;
      for (const std::string& line : gather_lines(codec_args)) {
        try {
          std::cout << karyograph::demangle(karyograph::SafeName{line}, atlas) << "\n";
        } catch (const karyograph::CodecError& e) {
          std::cerr << e.what() << "\n";
          any_failed = true;
        }
      }
      return any_failed ? kExitDomain : kExitOk;
    }

    if (cmd_export->parsed()) {
      if (corpus_path.empty()) throw UsageFailure{"--corpus is required"};
      std::ifstream in = open_or_usage_error(corpus_path, "corpus");
      karyograph::Corpus corpus = karyograph::Corpus::load(in, atlas);
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw UsageFailure{"cannot open output file: " + out_path};
      karyograph::export_ontology(atlas, corpus, out);
      std::cerr << "wrote " << out_path << " (" << corpus.size() << " corpus entries)\n";
      return kExitOk;
    }

    if (cmd_atlas->parsed()) {
      std::size_t distinct = atlas.distinct_band_count();
      for (karyograph::ChromosomeId chrom : atlas.chromosomes()) {
        std::map<karyograph::Resolution, int> per_res;
        std::size_t per_chrom = 0;
        for (const auto& [text, info] : atlas.bands()) {
          if (!(info.address.chromosome == chrom)) continue;
          ++per_chrom;
          for (karyograph::Resolution res : info.resolutions) ++per_res[res];
        }
        std::cout << "chromosome " << chrom.label() << ":";
        for (const auto& [res, count] : per_res) {
          std::cout << " " << karyograph::resolution_bands(res) << "=" << count;
        }
        std::cout << " distinct=" << per_chrom << "\n";
      }
      std::cout << "chromosomes: " << atlas.chromosomes().size() << "\n";
      std::cout << "bands: " << distinct << "\n";
      std::cout << "projected-classes: " << karyograph::skeleton_class_count() + distinct
                << " (skeleton " << karyograph::skeleton_class_count() << " + bands " << distinct
                << "; add one per corpus entry)\n";
      return kExitOk;
    }

    throw UsageFailure{"no subcommand selected"};
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const karyograph::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
