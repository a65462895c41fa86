#include "tggdbg/neighborhood.hpp"

#include <deque>
#include <map>
#include <string_view>
#include <vector>

#include "tggdbg/errors.hpp"

namespace tgg {

std::set<std::string> kNeighborhood(const TripleGraph& triple, const std::set<std::string>& seeds,
                                    int k) {
  if (k < 0 || k > kMaxNeighborhood) {
    throw Error(ErrorCode::Argument, "neighborhood size must be in [0, 3], got " + std::to_string(k));
  }
  for (const auto& s : seeds) {
    if (triple.findNode(s) == nullptr) {
      throw Error(ErrorCode::Argument, "neighborhood seed '" + s + "' is not a node", s);
    }
  }

  std::map<std::string_view, std::vector<std::string_view>> adjacent;
  auto link = [&](std::string_view a, std::string_view b) {
    if (triple.findNode(a) == nullptr || triple.findNode(b) == nullptr) return;
    adjacent[a].push_back(b);
    adjacent[b].push_back(a);
  };
  for (const auto& [id, e] : triple.edges()) link(e.source, e.target);
  for (const auto& [id, c] : triple.corrs()) link(c.source, c.target);

  std::map<std::string_view, int> dist;
  std::deque<std::string_view> queue;
  for (const auto& s : seeds) {
    dist.emplace(s, 0);
    queue.push_back(s);
  }
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    const int d = dist[cur];
    if (d == k) continue;
    for (auto next : adjacent[cur]) {
      if (dist.emplace(next, d + 1).second) queue.push_back(next);
    }
  }

  std::set<std::string> out;
  for (const auto& [id, d] : dist) out.emplace(id);
  auto inside = [&](const std::string& id) { return dist.contains(id); };
  for (const auto& [id, e] : triple.edges()) {
    if (inside(e.source) && inside(e.target)) out.insert(id);
  }
  for (const auto& [id, c] : triple.corrs()) {
    if (inside(c.source) && inside(c.target)) out.insert(id);
  }
  return out;
}

}  // namespace tgg
