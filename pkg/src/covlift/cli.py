"""Command line entry point: run job files and write reports."""

import argparse
import sys

from .groups import CompletionFailure
from .jobs import JobParseError, parse_job
from .report import VerificationError, run_job

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_VERIFY = 3
EXIT_LIMIT = 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="covlift",
        description="Classify simple modules, compute second cohomology, "
                    "build covers with elementary-abelian kernels, and lift "
                    "epimorphisms round by round, as described by a job "
                    "file.")
    parser.add_argument("--job", required=True, metavar="FILE",
                        help="job file to run (see the job grammar in the "
                             "README)")
    parser.add_argument("--report", metavar="DIR",
                        help="write one TSV per task (plus a PNG of orders "
                             "per round for iterate tasks) into this "
                             "directory; without it, tables go to stdout")
    parser.add_argument("--verify", action="store_true",
                        help="run independent cross-checks: confluence "
                             "audits, the coset-enumeration kernel oracle, "
                             "brute-force cocycle counts on small groups, "
                             "and the Fox derivative identity suite")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress progress messages")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    log = (lambda *_: None) if args.quiet and args.report else print
    try:
        with open(args.job) as fh:
            text = fh.read()
    except OSError as exc:
        print("error: cannot read job file: %s" % exc, file=sys.stderr)
        return EXIT_ERROR
    try:
        job = parse_job(text)
    except JobParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    try:
        run_job(job, outdir=args.report, verify=args.verify, log=log)
    except VerificationError as exc:
        print("verification failed: %s" % exc, file=sys.stderr)
        return EXIT_VERIFY
    except CompletionFailure as exc:
        print("resource limit reached: %s" % exc, file=sys.stderr)
        return EXIT_LIMIT
    except (ValueError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
