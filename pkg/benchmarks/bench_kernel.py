"""Compare the compiled and pure enumeration kernels on identical inputs.

Usage: python3 benchmarks/bench_kernel.py [--copies N] [--programs K]

Generates random ground programs (merging disjoint renamed copies to widen
the candidate atom base), packs each once, then times solve_masks with both
kernels over the same packed inputs and checks that the masks agree.
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from aspcore2 import kernel
from aspcore2._packed import pack_program
from aspcore2.ground import GroundProgram
from aspcore2.syntax import ClassicalAtom, NafLiteral, Rule
from generators import random_ground_program


def renamed(rule, copy):
    def rn(atom):
        if not isinstance(atom, ClassicalAtom):
            return atom
        return ClassicalAtom(f"{atom.predicate}{copy}", atom.args, atom.strong_negation)

    head = tuple(rn(a) for a in rule.head)
    body = tuple(NafLiteral(rn(l.atom), l.naf) for l in rule.body)
    return Rule(head, body)


def generate(rng, copies, low, high):
    while True:
        rules = []
        for copy in range(copies):
            part = random_ground_program(rng, with_aggregates=False, atom_count=8)
            rules.extend(renamed(rule, copy) for rule in part.rules)
        flat = pack_program(GroundProgram(tuple(rules))).flat()
        if low <= flat[0] <= high:
            return flat


def time_kernel(name, flats, repeats):
    total = 0.0
    for flat in flats:
        samples = []
        for _ in range(repeats):
            start = time.perf_counter()
            kernel.solve_masks(flat, name)
            samples.append(time.perf_counter() - start)
        total += min(samples)
    return total


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--copies", type=int, default=3, help="8-atom blocks per program")
    parser.add_argument("--min-atoms", type=int, default=14)
    parser.add_argument("--max-atoms", type=int, default=17)
    parser.add_argument("--programs", type=int, default=10, help="programs to time")
    parser.add_argument("--repeats", type=int, default=3, help="timings per program")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    if not kernel.compiled_available():
        print("compiled kernel not built; nothing to compare", file=sys.stderr)
        return 1

    rng = random.Random(args.seed)
    flats = [
        generate(rng, args.copies, args.min_atoms, args.max_atoms)
        for _ in range(args.programs)
    ]
    sizes = [flat[0] for flat in flats]
    print(f"programs: {len(flats)}  candidate atoms: min {min(sizes)} max {max(sizes)}")

    compiled = time_kernel("compiled", flats, args.repeats)
    pure = time_kernel("python", flats, args.repeats)
    agree = all(
        sorted(kernel.solve_masks(f, "compiled"))
        == sorted(kernel.solve_masks(f, "python"))
        for f in flats
    )
    print(f"compiled kernel: {compiled:.4f}s total")
    print(f"pure kernel:     {pure:.4f}s total")
    print(f"speedup:         {pure / compiled:.1f}x")
    print(f"results agree:   {agree}")
    return 0 if agree else 1


if __name__ == "__main__":
    sys.exit(main())
