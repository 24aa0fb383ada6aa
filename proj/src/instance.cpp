#include "cflp/instance.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cflp/rng.hpp"
#include "cflp/util.hpp"

namespace cflp {

double Instance::total_demand() const {
  KahanSum s;
  for (double d : demand) s.add(d);
  return s.value();
}

double Instance::total_capacity() const {
  KahanSum s;
  for (double c : capacity) s.add(c);
  return s.value();
}

double solution_cost(const Instance& inst, const std::vector<int>& open,
                     const std::vector<double>& assignment) {
  KahanSum total;
  for (int j = 0; j < inst.num_facilities; ++j)
    if (open[j]) total.add(inst.fixed_cost[j]);
  for (int i = 0; i < inst.num_customers; ++i)
    for (int j = 0; j < inst.num_facilities; ++j) {
      double x = assignment[static_cast<std::size_t>(i) * inst.num_facilities + j];
      if (x != 0.0) total.add(inst.demand[i] * inst.cost(i, j) * x);
    }
  return total.value();
}

namespace {

std::string index1(const char* name, int k) {
  return std::string(name) + "[" + std::to_string(k) + "]";
}

}  // namespace

ValidationResult validate_instance(const Instance& inst) {
  ValidationResult r;
  auto add = [&r](Violation::Kind kind, int i, int j, std::string msg) {
    r.violations.push_back({kind, i, j, std::move(msg)});
  };

  const int m = inst.num_customers;
  const int n = inst.num_facilities;
  if (m < 1) add(Violation::Kind::NonPositiveSize, -1, -1, "num_customers must be positive");
  if (n < 1) add(Violation::Kind::NonPositiveSize, -1, -1, "num_facilities must be positive");

  auto check_len = [&](const std::vector<double>& v, std::size_t want, const char* name) {
    if (v.size() != want) {
      add(Violation::Kind::DimensionMismatch, -1, -1,
          std::string(name) + " has length " + std::to_string(v.size()) + ", expected " +
              std::to_string(want));
      return false;
    }
    return true;
  };
  if (m < 1 || n < 1) return r;

  bool dims_ok = check_len(inst.fixed_cost, static_cast<std::size_t>(n), "fixed_cost");
  dims_ok &= check_len(inst.capacity, static_cast<std::size_t>(n), "capacity");
  dims_ok &= check_len(inst.demand, static_cast<std::size_t>(m), "demand");
  dims_ok &= check_len(inst.transport_cost, static_cast<std::size_t>(m) * n, "transport_cost");
  if (!dims_ok) return r;

  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(inst.fixed_cost[j]))
      add(Violation::Kind::NonFinite, -1, j, index1("f", j) + " is not finite");
    else if (inst.fixed_cost[j] < 0.0)
      add(Violation::Kind::NegativeCost, -1, j, index1("f", j) + " is negative");
    if (!std::isfinite(inst.capacity[j]))
      add(Violation::Kind::NonFinite, -1, j, index1("s", j) + " is not finite");
    else if (inst.capacity[j] <= 0.0)
      add(Violation::Kind::NonPositiveCapacity, -1, j, index1("s", j) + " must be positive");
  }
  for (int i = 0; i < m; ++i) {
    if (!std::isfinite(inst.demand[i]))
      add(Violation::Kind::NonFinite, i, -1, index1("d", i) + " is not finite");
    else if (inst.demand[i] <= 0.0)
      add(Violation::Kind::NonPositiveDemand, i, -1, index1("d", i) + " must be positive");
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double c = inst.cost(i, j);
      if (!std::isfinite(c)) {
        add(Violation::Kind::NonFinite, i, j,
            "c[" + std::to_string(i) + "][" + std::to_string(j) + "] is not finite");
      } else if (c < 0.0) {
        add(Violation::Kind::NegativeCost, i, j,
            "c[" + std::to_string(i) + "][" + std::to_string(j) + "] is negative");
      }
    }
  if (!r.violations.empty()) return r;

  double cap = inst.total_capacity();
  double dem = inst.total_demand();
  if (cap < dem) {
    std::ostringstream os;
    os.precision(17);
    os << "total capacity " << cap << " < total demand " << dem;
    add(Violation::Kind::InsufficientCapacity, -1, -1, os.str());
  }
  return r;
}

Instance generate_instance(int num_customers, int num_facilities, std::uint64_t seed) {
  Instance inst;
  inst.num_customers = num_customers;
  inst.num_facilities = num_facilities;
  const std::size_t m = static_cast<std::size_t>(num_customers);
  const std::size_t n = static_cast<std::size_t>(num_facilities);
  inst.transport_cost.resize(m * n);
  inst.fixed_cost.resize(n);
  inst.demand.resize(m);
  inst.capacity.resize(n);

  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < m * n; ++k) inst.transport_cost[k] = rng.next_open(50.0, 100.0);
  for (std::size_t j = 0; j < n; ++j) inst.fixed_cost[j] = rng.next_open(1000.0, 1500.0);
  for (std::size_t i = 0; i < m; ++i) inst.demand[i] = rng.next_open(50.0, 100.0);
  for (std::size_t j = 0; j < n; ++j) inst.capacity[j] = rng.next_open(2000.0, 2500.0);
  return inst;
}

namespace {

// Pulls the next non-comment, non-blank line. Returns false on EOF.
bool next_data_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return true;
  }
  return false;
}

std::vector<double> parse_numbers(const std::string& line, int line_no, std::size_t expect,
                                  const char* what) {
  std::vector<double> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(line_no, std::string("cannot parse '") + tok + "' as a number");
    }
  }
  if (out.size() != expect)
    throw ParseError(line_no, std::string(what) + ": expected " + std::to_string(expect) +
                                  " values, got " + std::to_string(out.size()));
  return out;
}

}  // namespace

Instance read_instance(std::istream& in) {
  std::string line;
  int line_no = 0;

  if (!next_data_line(in, line, line_no)) throw ParseError(1, "empty file");
  {
    std::istringstream is(line);
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "cflp" || version != 1)
      throw ParseError(line_no, "expected header 'cflp 1'");
  }

  if (!next_data_line(in, line, line_no)) throw ParseError(line_no + 1, "missing size line");
  long m = 0, n = 0;
  {
    std::istringstream is(line);
    std::string extra;
    if (!(is >> m >> n) || (is >> extra) || m < 1 || n < 1)
      throw ParseError(line_no, "size line must be two positive integers 'm n'");
  }

  Instance inst;
  inst.num_customers = static_cast<int>(m);
  inst.num_facilities = static_cast<int>(n);

  if (!next_data_line(in, line, line_no)) throw ParseError(line_no + 1, "missing fixed costs");
  inst.fixed_cost = parse_numbers(line, line_no, static_cast<std::size_t>(n), "fixed costs");
  if (!next_data_line(in, line, line_no)) throw ParseError(line_no + 1, "missing capacities");
  inst.capacity = parse_numbers(line, line_no, static_cast<std::size_t>(n), "capacities");
  if (!next_data_line(in, line, line_no)) throw ParseError(line_no + 1, "missing demands");
  inst.demand = parse_numbers(line, line_no, static_cast<std::size_t>(m), "demands");

  inst.transport_cost.reserve(static_cast<std::size_t>(m) * n);
  for (long i = 0; i < m; ++i) {
    if (!next_data_line(in, line, line_no))
      throw ParseError(line_no + 1, "missing transport cost row " + std::to_string(i + 1));
    auto row = parse_numbers(line, line_no, static_cast<std::size_t>(n),
                             "transport cost row");
    inst.transport_cost.insert(inst.transport_cost.end(), row.begin(), row.end());
  }
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_instance(in);
}

namespace {

void write_row(std::ostream& out, const std::vector<double>& v, std::size_t begin,
               std::size_t end) {
  char buf[64];
  for (std::size_t k = begin; k < end; ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", v[k]);
    if (k > begin) out << ' ';
    out << buf;
  }
  out << '\n';
}

}  // namespace

void write_instance(const Instance& inst, std::ostream& out) {
  const std::size_t m = static_cast<std::size_t>(inst.num_customers);
  const std::size_t n = static_cast<std::size_t>(inst.num_facilities);
  out << "cflp 1\n" << m << ' ' << n << '\n';
  write_row(out, inst.fixed_cost, 0, n);
  write_row(out, inst.capacity, 0, n);
  write_row(out, inst.demand, 0, m);
  for (std::size_t i = 0; i < m; ++i) write_row(out, inst.transport_cost, i * n, (i + 1) * n);
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_instance(inst, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace cflp
