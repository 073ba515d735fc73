#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "transkb/engine.hpp"
#include "transkb/featurize.hpp"

namespace py = pybind11;
using namespace transkb;

PYBIND11_MODULE(_transkb, m) {
  m.doc() = "translation-based knowledge-base embeddings with description encoders";

  py::register_exception<Error>(m, "Error");

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("mode", &RunConfig::mode)
      .def_readwrite("data_dir", &RunConfig::data_dir)
      .def_readwrite("train_file", &RunConfig::train_file)
      .def_readwrite("valid_file", &RunConfig::valid_file)
      .def_readwrite("test_file", &RunConfig::test_file)
      .def_readwrite("descriptions_file", &RunConfig::descriptions_file)
      .def_readwrite("word_vectors_file", &RunConfig::word_vectors_file)
      .def_readwrite("model_file", &RunConfig::model_file)
      .def_readwrite("metrics_file", &RunConfig::metrics_file)
      .def_readwrite("strict_descriptions", &RunConfig::strict_descriptions)
      .def_readwrite("gamma", &RunConfig::gamma)
      .def_readwrite("lr", &RunConfig::lr)
      .def_readwrite("momentum", &RunConfig::momentum)
      .def_readwrite("batch_size", &RunConfig::batch_size)
      .def_readwrite("epochs", &RunConfig::epochs)
      .def_readwrite("dim", &RunConfig::dim)
      .def_readwrite("distance", &RunConfig::distance)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("filtered_negatives", &RunConfig::filtered_negatives)
      .def_readwrite("renormalize_relations", &RunConfig::renormalize_relations)
      .def_readwrite("eval_every", &RunConfig::eval_every)
      .def_readwrite("early_stopping", &RunConfig::early_stopping)
      .def_readwrite("patience", &RunConfig::patience)
      .def_readwrite("hidden_dim", &RunConfig::hidden_dim)
      .def_readwrite("dense_dim", &RunConfig::dense_dim)
      .def_readwrite("seq_len", &RunConfig::seq_len)
      .def_readwrite("word_dim", &RunConfig::word_dim)
      .def_readwrite("normalize_output", &RunConfig::normalize_output)
      .def_readwrite("eval_split", &RunConfig::eval_split)
      .def_readwrite("sample_size", &RunConfig::sample_size)
      .def_readwrite("val_sample", &RunConfig::val_sample)
      .def_readwrite("threads", &RunConfig::threads)
      .def_readwrite("pessimistic", &RunConfig::pessimistic)
      .def_readwrite("hits_cutoff", &RunConfig::hits_cutoff)
      .def("validate", &RunConfig::validate);

  m.def("parse_run_config_file", &parse_run_config_file, py::arg("path"));

  py::class_<IngestReport>(m, "IngestReport")
      .def_readonly("entities", &IngestReport::entities)
      .def_readonly("relations", &IngestReport::relations)
      .def_readonly("train", &IngestReport::train)
      .def_readonly("valid", &IngestReport::valid)
      .def_readonly("test", &IngestReport::test)
      .def_readonly("have_descriptions", &IngestReport::have_descriptions)
      .def_readonly("descriptions", &IngestReport::descriptions)
      .def_readonly("skipped_descriptions", &IngestReport::skipped_descriptions)
      .def_readonly("overwritten_descriptions", &IngestReport::overwritten_descriptions)
      .def_readonly("missing_descriptions", &IngestReport::missing_descriptions)
      .def_readonly("description_words", &IngestReport::description_words)
      .def_readonly("max_description_tokens", &IngestReport::max_description_tokens)
      .def_readonly("words", &IngestReport::words)
      .def_readonly("word_dim", &IngestReport::word_dim)
      .def("to_text", &IngestReport::to_text)
      .def("__repr__", &IngestReport::to_text);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("evaluated", &EvalReport::evaluated)
      .def_readonly("total_triples", &EvalReport::total_triples)
      .def_readonly("candidate_count", &EvalReport::candidate_count)
      .def_readonly("hits_cutoff", &EvalReport::hits_cutoff)
      .def_readonly("left_mean_rank", &EvalReport::left_mean_rank)
      .def_readonly("right_mean_rank", &EvalReport::right_mean_rank)
      .def_readonly("mean_rank", &EvalReport::mean_rank)
      .def_readonly("left_hits", &EvalReport::left_hits)
      .def_readonly("right_hits", &EvalReport::right_hits)
      .def_readonly("hits", &EvalReport::hits)
      .def_readonly("left_ranks", &EvalReport::left_ranks)
      .def_readonly("right_ranks", &EvalReport::right_ranks)
      .def("to_text", &EvalReport::to_text)
      .def("to_tsv", &EvalReport::to_tsv)
      .def("__repr__", &EvalReport::to_text);

  py::class_<UnseenEvalReport>(m, "UnseenEvalReport")
      .def_readonly("evaluated", &UnseenEvalReport::evaluated)
      .def_readonly("skipped_both_seen", &UnseenEvalReport::skipped_both_seen)
      .def_readonly("skipped_both_unseen", &UnseenEvalReport::skipped_both_unseen)
      .def_readonly("hits_cutoff", &UnseenEvalReport::hits_cutoff)
      .def_readonly("mean_rank", &UnseenEvalReport::mean_rank)
      .def_readonly("hits", &UnseenEvalReport::hits)
      .def_readonly("ranks", &UnseenEvalReport::ranks)
      .def("to_text", &UnseenEvalReport::to_text)
      .def("to_tsv", &UnseenEvalReport::to_tsv)
      .def("__repr__", &UnseenEvalReport::to_text);

  py::class_<EvalRunResult>(m, "EvalRunResult")
      .def_readonly("link", &EvalRunResult::link)
      .def_readonly("has_unseen", &EvalRunResult::has_unseen)
      .def_readonly("unseen", &EvalRunResult::unseen)
      .def("to_text", &EvalRunResult::to_text)
      .def("__repr__", &EvalRunResult::to_text);

  m.def("run_ingest", &run_ingest, py::arg("config"));

  m.def(
      "run_train",
      [](const RunConfig& config, const py::object& progress) {
        std::function<void(const TrainProgress&)> hook;
        if (!progress.is_none()) {
          hook = [progress](const TrainProgress& p) {
            py::object validation = p.validation ? py::cast(*p.validation) : py::none();
            progress(p.info.epoch, p.info.loss, validation);
          };
        }
        run_train(config, hook);
      },
      py::arg("config"), py::arg("progress") = py::none(),
      "Train per the config and save the checkpoint; progress(epoch, loss, validation) is "
      "called after every epoch.");

  m.def("run_eval", &run_eval, py::arg("config"));

  m.def(
      "run_embed",
      [](const RunConfig& config, const std::vector<std::string>& names) {
        std::vector<std::pair<std::string, std::vector<real>>> out;
        for (EmbedRow& row : run_embed(config, names)) {
          out.emplace_back(std::move(row.name), std::move(row.values));
        }
        return out;
      },
      py::arg("config"), py::arg("names") = std::vector<std::string>{});

  m.def("embed_text", &embed_text, py::arg("config"), py::arg("text"));

  m.def(
      "run_query",
      [](const RunConfig& config, const std::string& relation, const std::string& head,
         const std::string& tail, std::int64_t k) {
        std::vector<std::pair<std::string, real>> out;
        for (const QueryMatch& match : run_query(config, head, relation, tail, k)) {
          out.emplace_back(match.name, match.distance);
        }
        return out;
      },
      py::arg("config"), py::arg("relation"), py::arg("head") = std::string(),
      py::arg("tail") = std::string(), py::arg("k") = 10);

  m.def("tokenize", &tokenize, py::arg("text"),
        "Lowercase and split on non-alphanumeric characters.");
  m.def("extract_3grams", &extract_3grams, py::arg("word"),
        "Character 3-grams of '#word#'.");
}
