#include "expertrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "expertrank/util.hpp"

namespace expertrank {

namespace {

inline bool is_relevant(const QueryGrades& grades, const std::string& author) {
    auto it = grades.find(author);
    return it != grades.end() && it->second > 0;
}

}  // namespace

double precision_at_k(const RankedList& ranked, const QueryGrades& grades, int k) {
    if (k < 1) throw std::invalid_argument("precision_at_k: k must be >= 1");
    int hits = 0;
    const std::size_t depth = std::min<std::size_t>(ranked.entries.size(), k);
    for (std::size_t i = 0; i < depth; ++i)
        if (is_relevant(grades, ranked.entries[i].author)) ++hits;
    return static_cast<double>(hits) / k;  // short lists pad with non-relevant
}

double average_precision(const RankedList& ranked, const QueryGrades& grades) {
    double sum = 0.0;
    int hits = 0;
    for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
        if (is_relevant(grades, ranked.entries[i].author)) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return hits > 0 ? sum / hits : 0.0;
}

double ndcg(const RankedList& ranked, const QueryGrades& grades, int k) {
    const std::size_t depth =
        k > 0 ? std::min<std::size_t>(ranked.entries.size(), k) : ranked.entries.size();
    double dcg = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
        auto it = grades.find(ranked.entries[i].author);
        const int rel = it == grades.end() ? 0 : it->second;
        if (rel > 0) dcg += (std::exp2(rel) - 1.0) / std::log2(static_cast<double>(i + 2));
    }

    std::vector<int> ideal;
    for (const auto& [author, g] : grades)
        if (g > 0) ideal.push_back(g);
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    const std::size_t ideal_depth =
        k > 0 ? std::min<std::size_t>(ideal.size(), k) : ideal.size();
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal_depth; ++i)
        idcg += (std::exp2(ideal[i]) - 1.0) / std::log2(static_cast<double>(i + 2));
    return idcg > 0.0 ? dcg / idcg : 0.0;
}

MetricReport evaluate_run(const std::map<std::string, RankedList>& run,
                          const std::map<std::string, QueryGrades>& judged_queries,
                          const std::vector<int>& ks) {
    for (const auto& [qid, list] : run)
        if (!judged_queries.count(qid))
            throw std::invalid_argument("run query has no judgments: " + qid);

    MetricReport report;
    report.precision_ks = ks;
    report.mean_p_at_k.assign(ks.size(), 0.0);
    for (const auto& [qid, grades] : judged_queries) {
        report.query_ids.push_back(qid);
        static const RankedList kEmpty;
        auto it = run.find(qid);
        const RankedList& list = it == run.end() ? kEmpty : it->second;
        std::vector<double> ps;
        ps.reserve(ks.size());
        for (std::size_t i = 0; i < ks.size(); ++i) {
            ps.push_back(precision_at_k(list, grades, ks[i]));
            report.mean_p_at_k[i] += ps.back();
        }
        report.p_at_k[qid] = std::move(ps);
        report.ap[qid] = average_precision(list, grades);
        report.ndcg_value[qid] = ndcg(list, grades);
        report.mean_ap += report.ap[qid];
        report.mean_ndcg += report.ndcg_value[qid];
    }
    const double n = static_cast<double>(report.query_ids.size());
    if (n > 0) {
        for (auto& v : report.mean_p_at_k) v /= n;
        report.mean_ap /= n;
        report.mean_ndcg /= n;
    }
    return report;
}

std::string MetricReport::to_tsv() const {
    std::ostringstream out;
    out << "query_id";
    for (int k : precision_ks) out << "\tP@" << k;
    out << "\tAP\tNDCG\n";
    for (const auto& qid : query_ids) {
        out << qid;
        for (double v : p_at_k.at(qid)) out << '\t' << fmt_double(v, 4);
        out << '\t' << fmt_double(ap.at(qid), 4) << '\t' << fmt_double(ndcg_value.at(qid), 4)
            << '\n';
    }
    out << "MEAN";
    for (double v : mean_p_at_k) out << '\t' << fmt_double(v, 4);
    out << '\t' << fmt_double(mean_ap, 4) << '\t' << fmt_double(mean_ndcg, 4) << '\n';
    return out.str();
}

std::string MetricReport::to_table() const {
    std::ostringstream out;
    out << "query         ";
    for (int k : precision_ks) {
        std::string h = "P@" + std::to_string(k);
        out << h << std::string(9 - h.size(), ' ');
    }
    out << "AP       NDCG\n";
    auto row = [&](const std::string& name, const std::vector<double>& ps, double apv,
                   double ndcgv) {
        std::string n = name.size() > 13 ? name.substr(0, 13) : name;
        out << n << std::string(14 - n.size(), ' ');
        for (double v : ps) out << fmt_double(v, 4) << "   ";
        out << fmt_double(apv, 4) << "   " << fmt_double(ndcgv, 4) << '\n';
    };
    for (const auto& qid : query_ids) row(qid, p_at_k.at(qid), ap.at(qid), ndcg_value.at(qid));
    row("MEAN", mean_p_at_k, mean_ap, mean_ndcg);
    return out.str();
}

double randomization_test(const std::vector<double>& per_query_a,
                          const std::vector<double>& per_query_b, int n_perm,
                          std::uint64_t seed) {
    if (per_query_a.size() != per_query_b.size())
        throw std::invalid_argument("randomization_test: length mismatch");
    if (per_query_a.empty()) throw std::invalid_argument("randomization_test: empty input");
    if (n_perm < 1) throw std::invalid_argument("randomization_test: n_perm must be >= 1");

    const std::size_t n = per_query_a.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = per_query_a[i] - per_query_b[i];
    double observed_sum = 0.0;
    for (double d : diff) observed_sum += d;
    const double observed = std::abs(observed_sum);

    std::mt19937_64 rng(seed);
    long long hits = 0;
    for (int p = 0; p < n_perm; ++p) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += (rng() & 1u) ? -diff[i] : diff[i];
        if (std::abs(sum) >= observed) ++hits;
    }
    return static_cast<double>(hits + 1) / static_cast<double>(n_perm + 1);
}

}  // namespace expertrank
