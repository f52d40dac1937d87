#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "sadele/cwi.h"
#include "sadele/http_backend.h"
#include "sadele/metrics.h"
#include "sadele/simplify.h"
#include "sadele/trace_io.h"

namespace py = pybind11;
using namespace sadele;

namespace {

/// Owns the resources the engine borrows, plus the configuration.
class Pipeline {
 public:
  Pipeline(const std::string& freq, const std::optional<std::string>& mlm_table,
           const std::optional<std::string>& mlm_url,
           const std::optional<std::string>& embeddings,
           const std::optional<std::string>& pos_lexicon, double threshold, int top_k,
           int window, const std::optional<std::vector<std::string>>& features) {
    if (mlm_table.has_value() == mlm_url.has_value()) {
      throw Error(ErrorCode::ConfigError, "give exactly one of mlm_table and mlm_url");
    }
    if (mlm_table) {
      backend_ = std::make_unique<TableBackend>(TableBackend::load(*mlm_table));
    } else {
      backend_ = std::make_unique<HttpBackend>(*mlm_url);
    }
    freq_ = FrequencyTable::load(freq);
    if (embeddings) emb_ = EmbeddingStore::load(*embeddings);
    if (pos_lexicon) tagger_ = PosLexicon::load(*pos_lexicon);

    cfg_.zipf_threshold = threshold;
    cfg_.top_k = top_k;
    cfg_.lm_window = window;
    if (features) {
      cfg_.enabled_features.clear();
      for (const auto& name : *features) {
        const auto kind = parse_feature(name);
        if (!kind) throw Error(ErrorCode::ConfigError, "unknown feature '" + name + "'");
        cfg_.enabled_features.insert(*kind);
      }
    }
    cfg_.validate();
  }

  std::string simplify(const std::string& text, bool strict) const {
    py::gil_scoped_release unlocked;
    return simplify_sentence(text, res(), cfg_, strict).text;
  }

  /// (output, trace record as a JSON string)
  std::pair<std::string, std::string> simplify_traced(const std::string& text,
                                                      bool strict) const {
    py::gil_scoped_release unlocked;
    const auto r = simplify_sentence(text, res(), cfg_, strict);
    return {r.text, trace_to_json_line(r.trace)};
  }

  std::vector<std::string> simplify_lines(const std::vector<std::string>& lines, unsigned jobs,
                                          bool strict) const {
    py::gil_scoped_release unlocked;
    std::vector<std::string> out;
    for (auto& r : simplify_corpus(lines, res(), cfg_, jobs, strict)) out.push_back(r.text);
    return out;
  }

  std::vector<std::size_t> complex_words(const std::string& text) const {
    return identify_complex(tag_sentence(tokenize(text), tagger_), freq_, cfg_);
  }

  std::vector<std::tuple<std::string, double, double>> ablation(const std::string& pairs,
                                                                unsigned jobs) const {
    const auto corpus = load_parallel(pairs);
    py::gil_scoped_release unlocked;
    std::vector<std::tuple<std::string, double, double>> rows;
    for (const auto& row : ablation_report(corpus, res(), cfg_, jobs).rows) {
      rows.emplace_back(row.label, row.bleu, row.sari);
    }
    return rows;
  }

  double zipf(const std::string& word) const { return freq_.zipf(word); }

 private:
  Resources res() const { return {tagger_, freq_, emb_, *backend_}; }

  PosLexicon tagger_;
  FrequencyTable freq_;
  EmbeddingStore emb_;
  std::unique_ptr<MlmBackend> backend_;
  PipelineConfig cfg_;
};

std::vector<TokenList> split_all(const std::vector<std::string>& lines) {
  std::vector<TokenList> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(eval_tokens(l));
  return out;
}

}  // namespace

PYBIND11_MODULE(_sadele, m) {
  m.doc() = "Turkish lexical simplification";

  static py::exception<Error> error_type(m, "SadeleError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      instance.attr("code") = std::string(to_string(e.code()));
      instance.attr("line") = e.line() ? py::cast(*e.line()) : py::none();
      PyErr_SetObject(error_type.ptr(), instance.ptr());
    }
  });

  m.def("tokenize", [](const std::string& text) { return tokenize(text).surfaces(); },
        py::arg("text"));
  m.def("casefold", [](const std::string& text) { return casefold_tr(text); }, py::arg("text"));

  m.def(
      "bleu",
      [](const std::vector<std::string>& hyps, const std::vector<std::string>& refs) {
        return bleu_corpus(split_all(hyps), split_all(refs));
      },
      py::arg("hyps"), py::arg("refs"), "Corpus BLEU over untokenized sentences.");
  m.def(
      "sari",
      [](const std::string& source, const std::string& hyp, const std::string& ref) {
        return sari_sentence(eval_tokens(source), eval_tokens(hyp), eval_tokens(ref));
      },
      py::arg("source"), py::arg("hyp"), py::arg("ref"));
  m.def(
      "sari_corpus",
      [](const std::vector<std::string>& sources, const std::vector<std::string>& hyps,
         const std::vector<std::string>& refs) {
        return sari_corpus(split_all(sources), split_all(hyps), split_all(refs));
      },
      py::arg("sources"), py::arg("hyps"), py::arg("refs"));

  py::class_<Pipeline>(m, "Pipeline")
      .def(py::init<const std::string&, const std::optional<std::string>&,
                    const std::optional<std::string>&, const std::optional<std::string>&,
                    const std::optional<std::string>&, double, int, int,
                    const std::optional<std::vector<std::string>>&>(),
           py::arg("freq"), py::kw_only(), py::arg("mlm_table") = py::none(),
           py::arg("mlm_url") = py::none(), py::arg("embeddings") = py::none(),
           py::arg("pos_lexicon") = py::none(), py::arg("threshold") = 4.0,
           py::arg("top_k") = 10, py::arg("window") = 5, py::arg("features") = py::none())
      .def("simplify", &Pipeline::simplify, py::arg("text"), py::arg("strict") = false)
      .def("simplify_traced", &Pipeline::simplify_traced, py::arg("text"),
           py::arg("strict") = false)
      .def("simplify_lines", &Pipeline::simplify_lines, py::arg("lines"), py::arg("jobs") = 1,
           py::arg("strict") = false)
      .def("complex_words", &Pipeline::complex_words, py::arg("text"))
      .def("ablation", &Pipeline::ablation, py::arg("pairs"), py::arg("jobs") = 1)
      .def("zipf", &Pipeline::zipf, py::arg("word"));
}
