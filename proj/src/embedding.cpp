#include "assoc/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "assoc/error.hpp"

namespace assoc {

SimilarityInterval::SimilarityInterval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= -1.0 && hi <= 1.0 && lo <= hi)) {
        throw DomainError("similarity interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] must satisfy -1 <= lo <= hi <= 1");
    }
}

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0) throw DomainError("embedding dimension must be positive");
}

bool EmbeddingStore::add(std::string word, std::span<const double> values) {
    if (values.size() != dimension_) {
        throw DomainError("vector for '" + word + "' has " + std::to_string(values.size()) +
                          " components, expected " + std::to_string(dimension_));
    }
    if (index_.find(word) != index_.end()) return false;
    double sq = 0.0;
    const std::size_t base = data_.size();
    data_.resize(base + dimension_);
    for (std::size_t j = 0; j < dimension_; ++j) {
        const auto f = static_cast<float>(values[j]);
        data_[base + j] = f;
        sq += static_cast<double>(f) * static_cast<double>(f);
    }
    if (sq == 0.0) {
        data_.resize(base);
        return false;
    }
    index_.emplace(word, static_cast<std::uint32_t>(words_.size()));
    words_.push_back(std::move(word));
    squared_norms_.push_back(sq);
    return true;
}

std::optional<std::uint32_t> EmbeddingStore::index_of(std::string_view word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t EmbeddingStore::require(std::string_view word) const {
    if (auto i = index_of(word)) return *i;
    throw OutOfVocabularyError({std::string(word)});
}

bool EmbeddingStore::contains(std::string_view word) const { return index_of(word).has_value(); }

Vector EmbeddingStore::vector(std::string_view word) const {
    auto r = row(require(word));
    return Vector(r.begin(), r.end());
}

double EmbeddingStore::dot_row(std::span<const double> q, std::uint32_t i) const {
    const auto r = row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < dimension_; ++j) s += q[j] * static_cast<double>(r[j]);
    return s;
}

// dot / sqrt(|a|^2 |b|^2) rather than dot / (|a| |b|): for identical
// vectors this is exactly 1.0, since sqrt(x*x) == x in IEEE arithmetic.
double EmbeddingStore::cosine_rows(std::uint32_t a, std::uint32_t b) const {
    if (a > b) std::swap(a, b);
    const auto ra = row(a);
    const auto rb = row(b);
    double s = 0.0;
    for (std::size_t j = 0; j < dimension_; ++j) s += static_cast<double>(ra[j]) * static_cast<double>(rb[j]);
    const double c = s / std::sqrt(squared_norms_[a] * squared_norms_[b]);
    return std::clamp(c, -1.0, 1.0);
}

double EmbeddingStore::cosine(std::string_view a, std::string_view b) const {
    return cosine_rows(require(a), require(b));
}

namespace {

double squared_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

double EmbeddingStore::cosine(std::span<const double> query, std::string_view word) const {
    if (query.size() != dimension_) throw DomainError("query dimension mismatch");
    const auto i = require(word);
    const double qq = squared_norm(query);
    if (qq == 0.0) throw DomainError("cosine undefined for a zero query vector");
    return std::clamp(dot_row(query, i) / std::sqrt(qq * squared_norms_[i]), -1.0, 1.0);
}

template <typename Filter>
std::vector<ScoredWord> EmbeddingStore::scan(std::span<const double> query, std::size_t k, double min_score,
                                             Filter&& keep) const {
    if (query.size() != dimension_) {
        throw DomainError("query has dimension " + std::to_string(query.size()) + ", store has " +
                          std::to_string(dimension_));
    }
    const double qq = squared_norm(query);
    if (qq == 0.0) throw DomainError("nearest-neighbour query with a zero vector");

    // Max-heap under ranks_before: the front is the weakest retained entry.
    std::vector<ScoredWord> heap;
    if (k == 0) return heap;
    heap.reserve(std::min(k, words_.size()) + 1);
    for (std::uint32_t i = 0; i < words_.size(); ++i) {
        const std::string& w = words_[i];
        if (!keep(i, w)) continue;
        const double s = std::clamp(dot_row(query, i) / std::sqrt(qq * squared_norms_[i]), -1.0, 1.0);
        if (s < min_score) continue;
        if (heap.size() < k) {
            heap.push_back({w, s});
            std::push_heap(heap.begin(), heap.end(), ranks_before);
        } else {
            const ScoredWord& worst = heap.front();
            if (s > worst.score || (s == worst.score && w < worst.word)) {
                std::pop_heap(heap.begin(), heap.end(), ranks_before);
                heap.back() = {w, s};
                std::push_heap(heap.begin(), heap.end(), ranks_before);
            }
        }
    }
    std::sort_heap(heap.begin(), heap.end(), ranks_before);
    return heap;
}

std::vector<ScoredWord> EmbeddingStore::nearest(std::span<const double> query, std::size_t k,
                                                const std::set<std::string, std::less<>>& exclude) const {
    return scan(query, k, -2.0, [&](std::uint32_t, const std::string& w) { return !exclude.contains(w); });
}

std::vector<ScoredWord> EmbeddingStore::similar_words(std::string_view word, double threshold,
                                                      std::size_t k) const {
    const auto self = index_of(word);
    if (!self) return {};
    const auto r = row(*self);
    const Vector q(r.begin(), r.end());
    return scan(q, k, threshold, [&](std::uint32_t i, const std::string&) { return i != *self; });
}

Vector EmbeddingStore::mean_vector(std::span<const std::string> words) const {
    if (words.empty()) throw ContractViolation("mean of an empty word list");
    std::vector<std::string> missing;
    for (const auto& w : words) {
        if (!contains(w)) missing.push_back(w);
    }
    if (!missing.empty()) throw OutOfVocabularyError(std::move(missing));

    Vector mean(dimension_, 0.0);
    for (const auto& w : words) {
        const auto r = row(*index_of(w));
        for (std::size_t j = 0; j < dimension_; ++j) mean[j] += static_cast<double>(r[j]);
    }
    for (double& x : mean) x /= static_cast<double>(words.size());
    return mean;
}

double EmbeddingStore::similarity_variance(std::string_view candidate,
                                           std::span<const std::string> anchors) const {
    if (anchors.empty()) throw ContractViolation("variance over an empty anchor list");
    const auto c = require(candidate);
    std::vector<double> sims;
    sims.reserve(anchors.size());
    for (const auto& a : anchors) sims.push_back(cosine_rows(c, require(a)));
    double mean = 0.0;
    for (double s : sims) mean += s;
    mean /= static_cast<double>(sims.size());
    double var = 0.0;
    for (double s : sims) var += (s - mean) * (s - mean);
    return var / static_cast<double>(sims.size());
}

// ---------------------------------------------------------------------------
// Text loader

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_real(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_count(std::string_view s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
    throw LoadError("embedding line " + std::to_string(line) + ": " + what);
}

}  // namespace

LoadedEmbedding load_embedding(std::istream& in, std::optional<std::size_t> expected_dimension) {
    if (!in) throw LoadError("embedding stream is not readable");
    if (expected_dimension && *expected_dimension == 0) throw LoadError("expected dimension must be positive");

    LoadedEmbedding out;
    std::optional<std::size_t> dim = expected_dimension;
    std::string line;
    std::size_t line_no = 0;
    Vector values;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_spaces(line);

        if (out.stats.lines == 0 && !out.stats.header_detected && fields.size() == 2) {
            std::size_t count = 0;
            std::size_t header_dim = 0;
            if (parse_count(fields[0], count) && parse_count(fields[1], header_dim)) {
                if (header_dim == 0) fail_at(line_no, "header declares dimension 0");
                if (dim && *dim != header_dim) {
                    fail_at(line_no, "header declares dimension " + std::to_string(header_dim) + ", expected " +
                                         std::to_string(*dim));
                }
                dim = header_dim;
                out.stats.header_detected = true;
                continue;
            }
        }
        if (fields.size() < 2) fail_at(line_no, "expected a token followed by numbers");

        if (!dim) dim = fields.size() - 1;
        const std::size_t d = *dim;
        if (fields.size() < d + 1) {
            fail_at(line_no, "found " + std::to_string(fields.size() - 1) + " components, expected " +
                                 std::to_string(d));
        }
        const std::size_t token_fields = fields.size() - d;
        if (token_fields > 1) {
            // Either a token containing spaces or a longer vector.
            double probe = 0.0;
            if (parse_real(fields[token_fields - 1], probe)) {
                fail_at(line_no, "found " + std::to_string(fields.size() - 1) + " components, expected " +
                                     std::to_string(d));
            }
        }

        values.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            if (!parse_real(fields[token_fields + j], values[j])) {
                fail_at(line_no, "malformed number '" + std::string(fields[token_fields + j]) + "'");
            }
        }
        std::string token(fields[0]);
        for (std::size_t t = 1; t < token_fields; ++t) {
            token += ' ';
            token += fields[t];
        }

        if (out.store.dimension() == 0) out.store = EmbeddingStore(d);
        ++out.stats.lines;
        const bool duplicate = out.store.contains(token);
        if (!out.store.add(std::move(token), values)) {
            if (duplicate) {
                ++out.stats.duplicates;
            } else {
                ++out.stats.zero_norm_dropped;
            }
        }
    }
    if (in.bad()) throw LoadError("read error in embedding stream at line " + std::to_string(line_no));
    if (out.store.dimension() == 0 && dim) out.store = EmbeddingStore(*dim);
    return out;
}

}  // namespace assoc
