"""Main entry point for the equivariant Reeb graph classification tool."""

from enum import Enum
import json
import sys
from absl import app, flags
from dotenv import load_dotenv
from logger import get_logger, set_logging_level
from classify import (casimir_moments, classification_report,
                      compatibility_check, iso_circulation_graph,
                      iso_measured_reeb)
from circulation import solve_circulation_space
from data_models import (CirculationGraph, MalformedInputError, MeasuredReebGraph,
                         SurfaceComplex, format_rational, parse_rational)
from fixture_factory import FIXTURE_REGISTRY, get_fixture
from graph_topology import orbit_moduli_dimension
from mesh_core import perturb_to_simple, validate_surface
from realization import realize_graph
from reeb_build import compute_reeb, graph_violations


# Define an Enum for subcommands
class Command(Enum):
  VALIDATE = "validate"
  REEB = "reeb"
  ORBIT_DIM = "orbit-dim"
  CIRCULATION = "circulation"
  CLASSIFY = "classify"
  CASIMIRS = "casimirs"
  COMPAT = "compat"
  PERTURB = "perturb"
  REALIZE = "realize"
  FIXTURES = "fixtures"
  EXPORT_DOT = "export-dot"


# Number of document operands each subcommand reads
OPERANDS = {
    Command.VALIDATE: 1,
    Command.REEB: 1,
    Command.ORBIT_DIM: 1,
    Command.CIRCULATION: 1,
    Command.CLASSIFY: 2,
    Command.CASIMIRS: 1,
    Command.COMPAT: 2,
    Command.PERTURB: 1,
    Command.REALIZE: 1,
    Command.FIXTURES: 1,
    Command.EXPORT_DOT: 1,
}

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_MALFORMED = 2

# Define flags
FLAGS = flags.FLAGS
flags.DEFINE_string("output", "-", "Where to write the result; '-' is stdout.",
                    short_name="o")
flags.DEFINE_string("eps", "1/10",
                    "Perturbation bound for 'perturb', as p/q.")
flags.DEFINE_integer("seed", None,
                     "Seed for 'perturb' and randomized fixtures. Defaults to "
                     "$FIXTURE_SEED or 0.")
flags.DEFINE_integer("grid_size", None,
                     "Grid side for grid fixtures. Defaults to "
                     "$FIXTURE_GRID_SIZE or 16.")
flags.DEFINE_string("tol", None,
                    "Sup-norm tolerance for 'classify', as p/q. Exact if unset.")
flags.DEFINE_list("k", ["0", "2", "4"], "Moment orders for 'casimirs'.")
flags.DEFINE_integer("refine", 4, "Refinement level for 'realize'.")
flags.DEFINE_boolean("basis", False,
                     "Also emit the homogeneous basis in 'circulation'.")
flags.DEFINE_boolean("circulation", False,
                     "Compare circulation graphs in 'classify'.")
flags.DEFINE_boolean("debug", False, "Enable debug logging.")

logger = get_logger(__name__)


def _read(path):
  if path == "-":
    return sys.stdin.read()
  try:
    with open(path, "r", encoding="utf-8") as f_in:
      return f_in.read()
  except OSError as e:
    raise MalformedInputError(f"Cannot read {path}: {e}") from e


def _write(text):
  if not text.endswith("\n"):
    text += "\n"
  if FLAGS.output == "-":
    sys.stdout.write(text)
  else:
    with open(FLAGS.output, "w", encoding="utf-8") as f_out:
      f_out.write(text)


def _report_error(error, kind):
  sys.stderr.write(json.dumps({"error": str(error), "kind": kind}) + "\n")


def _load_graph(text):
  return _checked(MeasuredReebGraph.from_json(text))


def _checked(graph):
  violations = graph_violations(graph)
  if violations:
    raise ValueError("Invalid measured Reeb graph: " + "; ".join(violations))
  return graph


# Genericity defects that perturb exists to remove
GENERICITY_CODES = frozenset({"duplicate_f_values", "zero_f_value"})


def _load_mesh(text, allow_non_generic=False):
  mesh = SurfaceComplex.from_json(text)
  report = validate_surface(mesh)
  entries = [e for e in report.entries
             if not (allow_non_generic and e.code in GENERICITY_CODES)]
  if entries:
    raise ValueError("Invalid surface complex: " +
                     "; ".join(e.message for e in entries))
  return mesh


def _moment_orders():
  try:
    return [int(k) for k in FLAGS.k]
  except ValueError as e:
    raise MalformedInputError(
        f"--k must list integers, got {FLAGS.k}") from e


def _circulation_document(graph):
  space = solve_circulation_space(graph)
  data = json.loads(CirculationGraph(graph, space.particular).to_json())
  if FLAGS.basis:
    data["basis"] = [{str(eid): format_rational(value)
                      for eid, value in sorted(vec.items())}
                     for vec in space.basis]
  data["dimension"] = space.dimension
  return json.dumps(data)


def _classify_document(first, second):
  tol = None if FLAGS.tol is None else parse_rational(FLAGS.tol)
  ks = _moment_orders()
  if FLAGS.circulation:
    c1, c2 = (CirculationGraph.from_json(first),
              CirculationGraph.from_json(second))
    g1, g2 = _checked(c1.base), _checked(c2.base)
    result = iso_circulation_graph(c1, c2, tol)
  else:
    g1, g2 = _load_graph(first), _load_graph(second)
    result = iso_measured_reeb(g1, g2, tol)
  document = result.to_dict()
  document["reports"] = [
      classification_report(g1, ks, {"second": result}),
      classification_report(g2, ks),
  ]
  return json.dumps(document)


def run_command(command, operands):
  """Runs one subcommand and returns its exit code.

  Args:
      command: The Command to run.
      operands: The positional arguments after the subcommand name.
  """
  if len(operands) != OPERANDS[command]:
    raise ValueError(f"'{command.value}' takes {OPERANDS[command]} operand(s), "
                     f"got {len(operands)}")

  if command == Command.FIXTURES:
    name = operands[0]
    if name not in FIXTURE_REGISTRY:
      raise ValueError(
          f"Unsupported fixture. Choose from: {list(FIXTURE_REGISTRY.keys())}")
    _write(get_fixture(name, FLAGS.seed, FLAGS.grid_size).to_json())
    return EXIT_OK

  documents = [_read(path) for path in operands]

  if command == Command.VALIDATE:
    report = validate_surface(SurfaceComplex.from_json(documents[0]))
    _write(report.to_json())
    return EXIT_OK if report.ok else EXIT_VALIDATION

  if command == Command.REEB:
    graph = compute_reeb(_load_mesh(documents[0]))
    logger.info("Writing Reeb graph with %d edges", len(graph.edges))
    _write(graph.to_json())
  elif command == Command.ORBIT_DIM:
    d = orbit_moduli_dimension(_load_graph(documents[0]))
    _write(f"d = {d}")
  elif command == Command.CIRCULATION:
    _write(_circulation_document(_load_graph(documents[0])))
  elif command == Command.CLASSIFY:
    _write(_classify_document(*documents))
  elif command == Command.CASIMIRS:
    table = casimir_moments(_load_graph(documents[0]), _moment_orders())
    _write(json.dumps(table.to_dict()))
  elif command == Command.COMPAT:
    report = compatibility_check(_load_graph(documents[0]),
                                 _load_mesh(documents[1], allow_non_generic=True))
    _write(report.to_json())
    return EXIT_OK if report.ok else EXIT_VALIDATION
  elif command == Command.PERTURB:
    seed = 0 if FLAGS.seed is None else FLAGS.seed
    mesh = perturb_to_simple(_load_mesh(documents[0], allow_non_generic=True),
                             parse_rational(FLAGS.eps), seed)
    _write(mesh.to_json())
  elif command == Command.REALIZE:
    mesh = realize_graph(_load_graph(documents[0]),
                         FLAGS.refine)
    _write(mesh.to_json())
  elif command == Command.EXPORT_DOT:
    _write(_load_graph(documents[0]).to_dot())
  return EXIT_OK


def main(argv):
  """Main entry point for the application.

  Args:
      argv: The command-line arguments left after flag parsing.

  Returns:
      0 on success, 1 on a validation failure, 2 on malformed input.
  """
  load_dotenv()

  # The first argument is the script name, so we ignore it.
  args = argv[1:]
  try:
    set_logging_level(FLAGS.debug)
    if not args:
      raise ValueError(
          f"Specify a subcommand: {[c.value for c in Command]}")
    try:
      command = Command(args[0])
    except ValueError:
      raise ValueError(f"Unknown subcommand: {args[0]}") from None
    return run_command(command, args[1:])
  except MalformedInputError as e:
    logger.error("Malformed input: %s", e, exc_info=FLAGS.debug)
    _report_error(e, "malformed")
    return EXIT_MALFORMED
  except ValueError as e:
    logger.error("An error occurred: %s", e, exc_info=FLAGS.debug)
    _report_error(e, "validation")
    return EXIT_VALIDATION
  except LookupError as e:
    # A reference the document promises but does not hold
    logger.error("Inconsistent document: %r", e, exc_info=True)
    _report_error(f"Inconsistent document: missing {e}", "validation")
    return EXIT_VALIDATION


if __name__ == "__main__":
  app.run(main)
