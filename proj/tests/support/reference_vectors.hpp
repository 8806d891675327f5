#pragma once

// Straight-line reimplementation of the cosine scoring used as a reference
// by the creativity tests: reads a whitespace-separated vector file, rounds
// to float like the store does, and scores candidates with nothing but loops.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace assoc::testing {

struct ReferenceVectors {
    std::map<std::string, std::vector<double>> rows;

    explicit ReferenceVectors(const std::string& path) {
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ss(line);
            std::string w;
            ss >> w;
            std::vector<double> v;
            float x;
            while (ss >> x) v.push_back(x);
            rows.emplace(w, v);
        }
    }

    static double cos(const std::vector<double>& a, const std::vector<double>& b) {
        double d = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            d += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        return d / std::sqrt(na * nb);
    }

    std::vector<double> mean(std::vector<std::string> words) const {
        std::sort(words.begin(), words.end());
        std::vector<double> m(rows.begin()->second.size(), 0.0);
        for (const auto& w : words)
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += rows.at(w)[i];
        for (auto& x : m) x /= static_cast<double>(words.size());
        return m;
    }

    double cos_to_mean(const std::string& w, const std::vector<std::string>& query) const {
        return cos(rows.at(w), mean(query));
    }

    double variance(const std::string& w, std::vector<std::string> anchors) const {
        std::sort(anchors.begin(), anchors.end());
        std::vector<double> s;
        for (const auto& a : anchors) s.push_back(cos(rows.at(w), rows.at(a)));
        double mu = 0;
        for (double x : s) mu += x;
        mu /= static_cast<double>(s.size());
        double v = 0;
        for (double x : s) v += (x - mu) * (x - mu);
        return v / static_cast<double>(s.size());
    }

    /// (word, score) pairs for the whole vocabulary, best first.
    std::vector<std::pair<std::string, double>> mean_ranking(const std::vector<std::string>& query) const {
        const auto m = mean(query);
        std::vector<std::pair<std::string, double>> out;
        for (const auto& [w, v] : rows) out.emplace_back(w, cos(v, m));
        sort_desc(out);
        return out;
    }

    std::vector<std::pair<std::string, double>> adjusted_ranking(const std::vector<std::string>& query,
                                                                 std::size_t pool) const {
        auto out = mean_ranking(query);
        out.resize(std::min(pool, out.size()));
        for (auto& [w, s] : out) s -= variance(w, query);
        sort_desc(out);
        return out;
    }

    static void sort_desc(std::vector<std::pair<std::string, double>>& v) {
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
    }
};

}  // namespace assoc::testing
