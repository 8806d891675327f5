#include <doctest.h>

#include <fstream>
#include <sstream>

#include "assoc/error.hpp"
#include "assoc/select.hpp"

using namespace assoc;

namespace {

std::string fixture(const std::string& name) { return std::string(ASSOC_FIXTURE_DIR) + "/" + name; }

EmbeddingStore dogfur_store() {
    std::ifstream in(fixture("dogfur.vec"));
    return load_embedding(in).store;
}

KnowledgeBase dogfur_kb() {
    std::ifstream in(fixture("dogfur.tsv"));
    return build_kb(triples_to_clauses(parse_triples(in, TripleFormat::Tsv).triples));
}

std::vector<std::string> ids(const KnowledgeBase& kb, const std::vector<std::size_t>& positions) {
    std::vector<std::string> out;
    for (auto p : positions) out.push_back(kb.clause(p).id);
    return out;
}

SelectionConfig config(double lo, double hi, std::size_t depth = 1) {
    SelectionConfig c;
    c.similarity_interval = SimilarityInterval(lo, hi);
    c.depth = depth;
    return c;
}

}  // namespace

TEST_SUITE("select") {

TEST_CASE("a context symbol selects the clauses mentioning it") {
    const auto kb = build_kb(parse_clause_text("dog(X) -> ?[Y]: hasa(X, Y), fur(Y)."));
    CHECK(syntactic_select(kb, Context::from_seeds({"dog"}), {}) == std::vector<std::size_t>{0});
    CHECK(syntactic_select(kb, Context::from_seeds({"zebra"}), {}).empty());
}

TEST_CASE("each level follows the symbols introduced by the previous one") {
    const auto kb = build_kb(parse_clause_text("p(X) -> q(X).\nq(X) -> r(X).\nr(X) -> s(X).\n"));
    const auto ctx = Context::from_seeds({"p"});
    CHECK(syntactic_select(kb, ctx, config(-1, 1, 0)) == std::vector<std::size_t>{0});
    CHECK(syntactic_select(kb, ctx, config(-1, 1, 1)) == std::vector<std::size_t>{0, 1});
    CHECK(syntactic_select(kb, ctx, config(-1, 1, 2)) == std::vector<std::size_t>{0, 1, 2});
    CHECK(syntactic_select(kb, ctx, config(-1, 1, 9)) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("frequent symbols do not trigger") {
    // isa occurs in three clauses; with a cutoff of 2 it cannot pull in the
    // cat and car clauses.
    const auto kb = build_kb(parse_clause_text(
        "dog(X) -> ?[Y]: isa(X, Y), animal(Y).\n"
        "cat(X) -> ?[Y]: isa(X, Y), animal(Y).\n"
        "car(X) -> ?[Y]: isa(X, Y), vehicle(Y).\n"));
    auto cfg = config(-1, 1, 1);
    cfg.frequency_cutoff = 2;
    // Level 1 follows animal (2 clauses) but not isa (3 clauses).
    CHECK(syntactic_select(kb, Context::from_seeds({"dog"}), cfg) == std::vector<std::size_t>{0, 1});
    CHECK(syntactic_select(kb, Context::from_seeds({"isa"}), cfg).empty());
    cfg.frequency_cutoff = 3;
    CHECK(syntactic_select(kb, Context::from_seeds({"dog"}), cfg) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("expand_context adds close neighbours after the seeds") {
    std::istringstream in("chew 1 4 0\nmanducate 1 4 0\nbite 1 3 1\nstone 0 0 1\n");
    const auto store = load_embedding(in).store;
    SelectionConfig cfg;
    cfg.neighbor_threshold = 1.0;
    auto ctx = expand_context(store, {"chew"}, cfg);
    CHECK(ctx.seed_symbols == std::vector<std::string>{"chew"});
    CHECK(ctx.expanded_symbols == std::vector<std::string>{"chew", "manducate"});

    cfg.neighbor_threshold = 0.9;
    ctx = expand_context(store, {"chew", "zebra"}, cfg);
    CHECK(ctx.expanded_symbols == std::vector<std::string>{"chew", "zebra", "manducate", "bite"});

    ctx = expand_context(store, {"zebra", "okapi"}, cfg);
    CHECK(ctx.expanded_symbols == std::vector<std::string>{"zebra", "okapi"});
}

TEST_CASE("expand_context keeps the best similarity of a shared neighbour") {
    std::istringstream in("a 1 0\nb 0 1\nn 1 1\n");
    const auto store = load_embedding(in).store;
    SelectionConfig cfg;
    cfg.neighbor_threshold = 0.5;
    const auto ctx = expand_context(store, {"a", "b"}, cfg);
    CHECK(ctx.expanded_symbols == std::vector<std::string>{"a", "b", "n"});
}

TEST_CASE("the dog/fur clause is selected and the poodle clause is not") {
    const auto kb = dogfur_kb();
    const auto store = dogfur_store();
    const auto ctx = Context::from_seeds({"dog", "fur"});
    CHECK(ids(kb, syntactic_select(kb, ctx, config(0.3, 0.8))) == std::vector<std::string>{"t1", "t2", "t3"});
    CHECK(ids(kb, associative_select(kb, store, ctx, config(0.3, 0.8))) == std::vector<std::string>{"t1"});
    // The default interval is the one above.
    CHECK(ids(kb, associative_select(kb, store, ctx, SelectionConfig{})) == std::vector<std::string>{"t1"});
}

TEST_CASE("the full interval filters nothing") {
    const auto kb = dogfur_kb();
    const auto store = dogfur_store();
    const auto ctx = expand_context(store, {"dog"}, config(-1, 1));
    CHECK(associative_select(kb, store, ctx, config(-1, 1)) == syntactic_select(kb, ctx, config(-1, 1)));
}

TEST_CASE("a near-identity interval keeps only clauses made of context symbols") {
    const auto kb = build_kb(parse_clause_text(
        "dog(X) -> fur(X).\n"
        "dog(X) -> poodle(X).\n"
        "fur(X) -> coat(X).\n"
        "dog(X), fur(X) -> hairy(X).\n"  // hairy has no vector
        "fur(X) -> carpet(X).\n"));
    const auto store = dogfur_store();
    const auto ctx = Context::from_seeds({"dog", "fur"});
    CHECK(associative_select(kb, store, ctx, config(0.99, 1.0)) == std::vector<std::size_t>{0, 3});
}

TEST_CASE("configuration is validated") {
    SelectionConfig c;
    c.neighbor_threshold = 1.5;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = SelectionConfig{};
    c.neighbor_cap = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
}

}  // TEST_SUITE
