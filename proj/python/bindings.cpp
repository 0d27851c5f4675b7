#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl_bind.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "topiccf/config.hpp"
#include "topiccf/error.hpp"
#include "topiccf/evaluate.hpp"
#include "topiccf/ingest.hpp"
#include "topiccf/lda.hpp"
#include "topiccf/persona.hpp"
#include "topiccf/pipeline.hpp"
#include "topiccf/recommend.hpp"
#include "topiccf/similarity.hpp"

namespace py = pybind11;
using namespace topiccf;

// Recommenders keep a pointer to the persona table, so it must be a real
// Python-side object rather than a converted temporary.
PYBIND11_MAKE_OPAQUE(topiccf::PersonaTable)

namespace {

std::vector<RatingRecord> records_from(const std::vector<std::tuple<UserId, ItemId, double>>& rows) {
    std::vector<RatingRecord> out;
    out.reserve(rows.size());
    for (const auto& [u, i, r] : rows) out.push_back({u, i, r, std::nullopt});
    return out;
}

py::object similarity_value(const SimilarityScore& s) {
    return s.defined ? py::object(py::float_(s.value)) : py::object(py::none());
}

std::vector<std::pair<ItemId, double>> as_pairs(const RecommendationList& list) {
    std::vector<std::pair<ItemId, double>> out;
    for (const auto& r : list.items) out.emplace_back(r.item, r.score);
    return out;
}

RunConfig config_from(const std::map<std::string, std::string>& settings) {
    RunConfig c;
    for (const auto& [k, v] : settings) apply_setting(c, k, v);
    validate(c);
    return c;
}

/// Model plus the vocabulary and encoding it was trained on.
struct TrainedTopics {
    EncodedVocabulary encoded;
    TopicModel model;
};

}  // namespace

PYBIND11_MODULE(_topiccf, m) {
    m.doc() = "Topic-model assisted collaborative filtering";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::class_<RatingDataset>(m, "RatingDataset")
        .def(py::init([](const std::vector<std::tuple<UserId, ItemId, double>>& rows) {
                 return RatingDataset(records_from(rows));
             }),
             py::arg("ratings"), "From (user, item, rating) tuples.")
        .def("__len__", &RatingDataset::size)
        .def_property_readonly("num_users", &RatingDataset::num_users)
        .def_property_readonly("num_items", &RatingDataset::num_items)
        .def_property_readonly("duplicates_dropped", &RatingDataset::duplicates_dropped)
        .def("users", [](const RatingDataset& d) { return std::vector<UserId>(d.users().begin(), d.users().end()); })
        .def("items", [](const RatingDataset& d) { return std::vector<ItemId>(d.items().begin(), d.items().end()); })
        .def("ratings_of",
             [](const RatingDataset& d, UserId u) {
                 std::map<ItemId, double> out;
                 for (const auto& r : d.ratings_of(u)) out[r.item] = r.rating;
                 return out;
             })
        .def("rating", &RatingDataset::rating)
        .def("records", [](const RatingDataset& d) {
            std::vector<std::tuple<UserId, ItemId, double>> out;
            for (const auto& r : d.records()) out.emplace_back(r.user, r.item, r.rating);
            return out;
        });

    m.def(
        "load_ratings",
        [](const std::filesystem::path& path, const std::string& format) {
            return load_ratings(path, parse_rating_format(format));
        },
        py::arg("path"), py::arg("format") = "movielens_dat");
    m.def(
        "parse_ratings",
        [](const std::string& text, const std::string& format) {
            std::istringstream in(text);
            return parse_ratings(in, parse_rating_format(format));
        },
        py::arg("text"), py::arg("format") = "movielens_dat");
    m.def(
        "split_train_test",
        [](const RatingDataset& ds, double fraction, std::uint64_t seed) {
            auto s = split_train_test(ds, fraction, seed);
            return std::make_pair(std::move(s.train), std::move(s.test));
        },
        py::arg("ratings"), py::arg("fraction") = 0.8, py::arg("seed") = 42, "Returns (train, test).");
    m.def(
        "summarize",
        [](const RatingDataset& ds) {
            const auto s = summarize(ds);
            py::dict d;
            d["users"] = s.users;
            d["items"] = s.items;
            d["max_ratings_per_user"] = s.max_ratings_per_user;
            d["avg_ratings_per_user"] = s.avg_ratings_per_user;
            return d;
        },
        py::arg("ratings"));

    m.def(
        "tokenize", [](const std::string& text) { return tokenize(text, default_stopwords()); }, py::arg("text"),
        "Tokens after lowercasing and removing the built-in stopwords.");

    py::class_<TrainedTopics>(m, "TopicModel")
        .def_property_readonly("num_topics", [](const TrainedTopics& t) { return t.model.num_topics(); })
        .def_property_readonly("vocabulary",
                               [](const TrainedTopics& t) {
                                   std::vector<std::string> out;
                                   for (std::size_t i = 0; i < t.encoded.vocabulary.size(); ++i) {
                                       out.push_back(t.encoded.vocabulary.token(i));
                                   }
                                   return out;
                               })
        .def("item_profiles", [](const TrainedTopics& t) { return item_profiles(t.model, t.encoded.corpus); })
        .def("phi",
             [](const TrainedTopics& t, std::size_t topic) {
                 if (topic >= t.model.num_topics()) throw py::index_error("topic out of range");
                 const auto row = t.model.phi(topic);
                 return std::vector<double>(row.begin(), row.end());
             })
        .def(
            "top_words",
            [](const TrainedTopics& t, std::size_t topic, std::size_t n) {
                if (topic >= t.model.num_topics()) throw py::index_error("topic out of range");
                return topic_top_words(t.model, t.encoded.vocabulary, topic, n);
            },
            py::arg("topic"), py::arg("n") = 10)
        .def("log_likelihood",
             [](const TrainedTopics& t) { return corpus_log_likelihood(t.model, t.encoded.corpus); });

    m.def(
        "train_topics",
        [](const std::map<ItemId, std::string>& documents, std::size_t topics, double alpha_sum, double beta,
           std::size_t iterations, std::uint64_t seed, std::size_t min_df) {
            DocumentCorpus corpus;
            corpus.docs = documents;
            TrainedTopics out{build_vocabulary(corpus, default_stopwords(), min_df), {}};
            LdaOptions opt;
            opt.num_topics = topics;
            opt.alpha_sum = alpha_sum;
            opt.beta = beta;
            opt.iterations = iterations;
            opt.seed = seed;
            py::gil_scoped_release release;
            out.model = train_lda(out.encoded.corpus, opt);
            return out;
        },
        py::arg("documents"), py::arg("topics") = 50, py::arg("alpha_sum") = 50.0, py::arg("beta") = 0.01,
        py::arg("iterations") = 1000, py::arg("seed") = 1, py::arg("min_df") = 1,
        "Collapsed Gibbs LDA over {item_id: text}.");

    py::class_<UserPersona>(m, "Persona")
        .def_readonly("user", &UserPersona::user)
        .def_readonly("distribution", &UserPersona::distribution)
        .def_property_readonly("defined", &UserPersona::defined)
        .def("__repr__", [](const UserPersona& p) {
            return "<Persona user=" + std::to_string(p.user) + (p.defined() ? "" : " undefined") + ">";
        });

    py::bind_map<PersonaTable>(m, "PersonaTable");

    m.def(
        "build_personas",
        [](const RatingDataset& train, const TopicProfiles& profiles) {
            return build_all_personas(train, profiles).personas;
        },
        py::arg("train"), py::arg("profiles"), "{user_id: Persona} from rated items' topic profiles.");
    m.def(
        "personas_from",
        [](const std::map<UserId, std::vector<double>>& distributions) {
            PersonaTable out;
            for (const auto& [u, p] : distributions) out[u] = UserPersona{u, p, p.empty() ? 0u : 1u, 0};
            return out;
        },
        py::arg("distributions"), "Personas from explicit distributions; an empty list is undefined.");

    m.def(
        "symmetric_kl", [](const std::vector<double>& p, const std::vector<double>& q) { return symmetric_kl(p, q); },
        py::arg("p"), py::arg("q"));
    m.def(
        "similarity",
        [](const std::string& measure, const RatingDataset& train, UserId u, UserId v,
           const PersonaTable* personas) -> py::object {
            if (measure == "pearson") return similarity_value(pearson_similarity(train, u, v));
            if (measure == "llr") return similarity_value(llr_similarity(train, u, v));
            if (measure == "topic" || measure == "hybrid") {
                if (personas == nullptr) throw ConfigError(measure + " similarity needs personas");
                if (measure == "hybrid") return similarity_value(hybrid_similarity(*personas, train, u, v));
                const auto a = personas->find(u), b = personas->find(v);
                if (a == personas->end() || b == personas->end()) return py::none();
                return similarity_value(topic_similarity(a->second, b->second));
            }
            throw ConfigError("unknown measure '" + measure + "' (valid: pearson, llr, topic, hybrid)");
        },
        py::arg("measure"), py::arg("train"), py::arg("u"), py::arg("v"), py::arg("personas") = nullptr,
        "None when the similarity is undefined.");

    py::class_<Recommender>(m, "Recommender")
        .def(
            "recommend",
            [](const Recommender& r, UserId user, std::size_t k) { return as_pairs(r.recommend(user, k)); },
            py::arg("user"), py::arg("k") = kDefaultMaxK, "[(item_id, score), ...] best first.")
        .def_property_readonly("algorithm", [](const Recommender& r) { return to_string(r.algorithm()); });

    m.def(
        "make_recommender",
        [](const std::string& algorithm, const RatingDataset& train, const PersonaTable* personas,
           std::size_t neighbors, double like_threshold) {
            return make_recommender(parse_algorithm(algorithm), train, personas, {neighbors, like_threshold});
        },
        py::arg("algorithm"), py::arg("train"), py::arg("personas") = nullptr,
        py::arg("neighbors") = kDefaultNeighbors, py::arg("like_threshold") = kMinRating,
        py::keep_alive<0, 2>(), py::keep_alive<0, 3>());
    m.attr("ALGORITHMS") = [] {
        std::vector<std::string> out;
        for (const auto a : kAllAlgorithms) out.push_back(to_string(a));
        return out;
    }();

    m.def(
        "evaluate",
        [](const Recommender& rec, const RatingDataset& test, std::vector<std::size_t> ks, double threshold) {
            EvalOptions opt;
            opt.ks = std::move(ks);
            opt.max_k = opt.ks.empty() ? 0 : *std::max_element(opt.ks.begin(), opt.ks.end());
            opt.relevance_threshold = threshold;
            const auto report = evaluate_sweep(
                to_string(rec.algorithm()), [&](UserId u, std::size_t k) { return rec.recommend(u, k); }, test, opt);
            py::list rows;
            for (const auto& r : report.rows) {
                py::dict d;
                d["k"] = r.k;
                d["precision"] = r.precision;
                d["recall"] = r.recall;
                d["f_measure"] = r.f_measure;
                d["users"] = r.users;
                rows.append(d);
            }
            return rows;
        },
        py::arg("recommender"), py::arg("test"), py::arg("ks") = default_ks(), py::arg("relevance_threshold") = 0.0);
    m.def("f_measure", &f_measure, py::arg("precision"), py::arg("recall"));

    auto run = [](auto command) {
        return [command](const std::map<std::string, std::string>& settings) {
            std::ostringstream log;
            command(config_from(settings), log);
            return log.str();
        };
    };
    m.def("cmd_split", run([](const RunConfig& c, std::ostream& o) { cmd_split(c, o); }), py::arg("settings"),
          "Pipeline stage with the CLI's key=value settings; returns the log.");
    m.def("cmd_train", run([](const RunConfig& c, std::ostream& o) { cmd_train(c, o); }), py::arg("settings"));
    m.def("cmd_personas", run([](const RunConfig& c, std::ostream& o) { cmd_personas(c, o); }), py::arg("settings"));
    m.def("cmd_evaluate", run([](const RunConfig& c, std::ostream& o) { cmd_evaluate(c, o); }), py::arg("settings"));
}
