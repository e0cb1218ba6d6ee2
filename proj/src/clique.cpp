#include "commtask/clique.hpp"

namespace commtask {

namespace {

class Search {
public:
  explicit Search(const Adjacency &adj) : adj_(adj) {}

  std::vector<std::size_t> run() {
    std::vector<std::size_t> all(adj_.size());
    for (std::size_t v = 0; v < all.size(); ++v)
      all[v] = v;
    expand(all);
    return best_;
  }

private:
  // Number of colour classes in a greedy colouring of cand: an upper bound
  // on any clique inside cand.
  std::size_t colour_bound(const std::vector<std::size_t> &cand) const {
    std::vector<std::vector<std::size_t>> classes;
    for (auto v : cand) {
      bool placed = false;
      for (auto &cls : classes) {
        bool independent = true;
        for (auto u : cls)
          if (adj_[u][v]) {
            independent = false;
            break;
          }
        if (independent) {
          cls.push_back(v);
          placed = true;
          break;
        }
      }
      if (!placed)
        classes.push_back({v});
    }
    return classes.size();
  }

  // Candidates are visited in increasing order, so the first clique reaching
  // a given size is the lexicographically smallest of that size; pruning only
  // drops branches that cannot beat the incumbent strictly.
  void expand(const std::vector<std::size_t> &cand) {
    if (current_.size() > best_.size())
      best_ = current_;
    if (cand.empty())
      return;
    if (current_.size() + colour_bound(cand) <= best_.size())
      return;
    for (std::size_t idx = 0; idx < cand.size(); ++idx) {
      if (current_.size() + (cand.size() - idx) <= best_.size())
        return;
      std::size_t v = cand[idx];
      std::vector<std::size_t> next;
      for (std::size_t k = idx + 1; k < cand.size(); ++k)
        if (adj_[v][cand[k]])
          next.push_back(cand[k]);
      current_.push_back(v);
      expand(next);
      current_.pop_back();
    }
  }

  const Adjacency &adj_;
  std::vector<std::size_t> current_, best_;
};

} // namespace

std::vector<std::size_t> maximum_clique(const Adjacency &adj) { return Search(adj).run(); }

} // namespace commtask
