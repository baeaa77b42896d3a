"""Command-line entry point of the nsym-bessel toolkit."""

import logging
import sys
from typing import List, Optional

from config.run_config import RunConfig
from config.settings import APP_NAME, DEBUG
from core.errors import NsymError, UsageError, VerificationError
from tools.commands import build_parser
from utils.formatting import Formatter

# Set logging level
logging_level = logging.DEBUG if DEBUG else logging.INFO
logger = logging.getLogger("nsym_bessel")

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2


def configure_logging(verbose: bool = False) -> None:
    """Log records go to stderr so that stdout carries only the artifact."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and emit its artifact.

    Returns:
        0 on success, 1 when a verification fails, 2 for usage and bound errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: UsageError: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(args.verbose)

    if not args.command:
        commands = ", ".join(sorted(args.registry.handlers))
        print(f"error: UsageError: no command given; expected one of {commands}", file=sys.stderr)
        return EXIT_USAGE

    try:
        overrides = {
            "max_n": args.max_n,
            "q_order": args.q_order,
            "p_order": args.p_order,
            "seed": args.seed,
            "format": args.format,
            "out": args.out,
            "timings": args.timings,
        }
        config = RunConfig.load(args.config, overrides)
        logger.debug(f"{APP_NAME}: running {args.command} with {config}")
        artifact = args.registry.run(args.command, args, config)
        Formatter.write(Formatter.render(artifact, config.format), config.out or None)
    except VerificationError as e:
        logger.error(f"Verification failed: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except NsymError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "verify-all" and not artifact.data.get("passed", False):
        logger.error("verify-all finished with failing checks")
        return EXIT_VERIFICATION
    return EXIT_OK


def main() -> None:
    """Main entry point for the nsym-bessel command line."""
    sys.exit(run())


# Main execution
if __name__ == "__main__":
    main()
