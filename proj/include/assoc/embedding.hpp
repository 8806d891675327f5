#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace assoc {

using Vector = std::vector<double>;

struct ScoredWord {
    std::string word;
    double score = 0.0;

    friend bool operator==(const ScoredWord&, const ScoredWord&) = default;
};

/// Closed similarity interval [lo, hi] within [-1, 1].
class SimilarityInterval {
public:
    SimilarityInterval() = default;
    SimilarityInterval(double lo, double hi);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    bool contains(double s) const noexcept { return s >= lo_ && s <= hi_; }

private:
    double lo_ = -1.0;
    double hi_ = 1.0;
};

struct EmbeddingLoadStats {
    std::size_t lines = 0;
    std::size_t duplicates = 0;
    std::size_t zero_norm_dropped = 0;
    bool header_detected = false;
};

/// Word -> vector map answering cosine queries. Vectors are stored as float
/// rows in one contiguous buffer; all arithmetic is done in double. The store
/// is immutable once loaded and every query is a const, thread-safe scan.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    explicit EmbeddingStore(std::size_t dimension);

    /// Appends a word; returns false (and keeps the first entry) for a
    /// duplicate or a zero vector.
    bool add(std::string word, std::span<const double> values);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return words_.size(); }
    bool contains(std::string_view word) const;

    const std::vector<std::string>& words() const noexcept { return words_; }

    /// Copy of the stored vector; throws OutOfVocabularyError.
    Vector vector(std::string_view word) const;

    /// Cosine in [-1, 1]; throws OutOfVocabularyError naming the missing word.
    double cosine(std::string_view a, std::string_view b) const;

    /// Cosine between an arbitrary query vector and a stored word.
    double cosine(std::span<const double> query, std::string_view word) const;

    /// Top-k words by cosine to `query`, descending, ties lexicographic.
    /// k larger than the vocabulary yields the full ranking. Throws
    /// DomainError on dimension mismatch or a zero query.
    std::vector<ScoredWord> nearest(std::span<const double> query, std::size_t k,
                                    const std::set<std::string, std::less<>>& exclude = {}) const;

    /// Neighbours of `word` with cosine >= threshold, at most k, excluding
    /// the word itself. Unknown words give an empty list.
    std::vector<ScoredWord> similar_words(std::string_view word, double threshold, std::size_t k) const;

    /// Componentwise mean; throws OutOfVocabularyError listing every
    /// missing word, ContractViolation on an empty list.
    Vector mean_vector(std::span<const std::string> words) const;

    /// Population variance of cosine(candidate, anchor) over the anchors.
    double similarity_variance(std::string_view candidate, std::span<const std::string> anchors) const;

private:
    std::optional<std::uint32_t> index_of(std::string_view word) const;
    std::uint32_t require(std::string_view word) const;
    std::span<const float> row(std::uint32_t i) const {
        return {data_.data() + static_cast<std::size_t>(i) * dimension_, dimension_};
    }
    double dot_row(std::span<const double> q, std::uint32_t i) const;
    double cosine_rows(std::uint32_t a, std::uint32_t b) const;

    template <typename Filter>
    std::vector<ScoredWord> scan(std::span<const double> query, std::size_t k, double min_score,
                                 Filter&& keep) const;

    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };

    std::size_t dimension_ = 0;
    std::vector<std::string> words_;
    std::vector<float> data_;
    std::vector<double> squared_norms_;
    std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
};

struct LoadedEmbedding {
    EmbeddingStore store;
    EmbeddingLoadStats stats;
};

/// Reads the common pretrained-vector text format: a token followed by d
/// space-separated reals per line, optionally preceded by a "count dim"
/// header. Tokens may themselves contain spaces once d is known (the last d
/// fields are the vector). Throws LoadError on inconsistent dimensions.
LoadedEmbedding load_embedding(std::istream& in, std::optional<std::size_t> expected_dimension = {});

/// Ranking order used everywhere: score descending, then word ascending.
inline bool ranks_before(const ScoredWord& a, const ScoredWord& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
}

}  // namespace assoc
