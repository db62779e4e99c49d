import logging
import sys
from pathlib import Path

import edwh
from edwh import improved_task as task
from invoke import Collection, Context, Program
from invoke.exceptions import Exit

from .__about__ import __version__
from .rr_base import (
    DEFAULT_PREC,
    DEFAULT_S_MAX,
    ConfigManager,
    ErrorHandler,
    RunConfig,
    default_jobs,
    parse_s_range,
    parse_schedule,
)


def _configure_logging(verbose):
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING)


def _build_config(command, verbose, **flags):
    return RunConfig.build(command, verbose=verbose, **flags)


def _finish(result, verbose):
    """Hand a CommandResult back to invoke: result dict on success, Exit(code) otherwise"""
    if result.success:
        if verbose:
            print("\n✅ Done")
        return result.as_task_result()
    print(f"❌ Finished with exit code {result.code}")
    raise Exit(code=result.code)


def _fail(operation, error, verbose):
    raise Exit(code=ErrorHandler.handle_task_error(operation, error, verbose)) from error


@task(
    help={
        'target': 'Named series (G, H, f0, theta, ...) or a sum literal such as "q=1;poch=q"',
        'prec': 'Precision P in t = q^(1/D) (default: 50)',
        's': 'The s parameter of theta / bressoud series',
        'mu': 'The mu parameter of the McIntosh series',
        'a': 'Specialize a: a number ("2", "-1", "1/2") or a monomial in t ("-t^-1")',
        'b': 'Specialize b, same syntax as --a',
        'spec_prec': 'Result precision after specializing by a monomial in t',
        'format': 'Output format: text or structured (newline-delimited JSON)',
        'out': 'Write output to this file instead of stdout',
        'verbose': 'Show progress information',
    },
    positional=['target'],
    hookable=False,
)
def expand(c: Context,
           target,
           prec=None,
           s=None,
           mu=None,
           a=None,
           b=None,
           spec_prec=None,
           format=None,
           out=None,
           verbose=False):
    """
    Expand a q-series exactly and print its canonical serialization

    Examples:
        edwh rrd.expand G --prec 6
        edwh rrd.expand theta --s 2 --prec 9 --format structured
        edwh rrd.expand "q=1/2,0,0;a=1;poch=q" --prec 10 --a 1
    """
    from .batch import cmd_expand

    _configure_logging(verbose)
    try:
        config = _build_config(
            "expand",
            verbose,
            prec=int(prec) if prec is not None else None,
            output_format=format,
            output_path=out,
        )
    except Exception as e:
        _fail("expand", e, verbose)

    if verbose:
        print(f"🚀 Expanding {target} to t^{config.prec}")
    result = cmd_expand(
        target,
        config,
        s=int(s) if s is not None else None,
        mu=int(mu) if mu is not None else None,
        a=a,
        b=b,
        spec_prec=int(spec_prec) if spec_prec is not None else None,
        verbose=verbose,
    )
    return _finish(result, verbose)


@task(
    help={
        'id': 'Identity id(s), comma-separated (default: every registry entry)',
        'all': 'Verify the whole registry (same as leaving out --id)',
        's': 's values: "3", "1..5" or "1,2,4"',
        'prec': 'Precision P in t (default: 50)',
        's_max': 'Largest s for entries with an unbounded s range (default: 5)',
        'jobs': 'Worker processes (default: available CPUs)',
        'perturb': 'Mutation hook "side:exponent[:delta]": add delta*t^exponent to one side',
        'format': 'Output format: text or structured (newline-delimited JSON)',
        'out': 'Write reports to this file instead of stdout',
        'verbose': 'Show progress information',
    },
    hookable=True,
)
def verify(c: Context,
           id=None,
           all=False,
           s=None,
           prec=None,
           s_max=None,
           jobs=None,
           perturb=None,
           format=None,
           out=None,
           verbose=False):
    """
    Verify registered identities exactly, one report per parameter set

    Exit code 0 when every report passes, 1 when any fails, 2 on usage errors.

    Examples:
        edwh rrd.verify --id theorem-1.1 --s 1..5 --prec 50
        edwh rrd.verify --all --jobs 4 --format structured --out reports.ndjson
        edwh rrd.verify --id gmr --perturb 1:7
    """
    from .batch import cmd_verify

    _configure_logging(verbose)
    try:
        identity_filter = () if all or not id else tuple(p.strip() for p in id.split(",") if p.strip())
        config = _build_config(
            "verify",
            verbose,
            identity_filter=identity_filter,
            s_values=parse_s_range(s),
            prec=int(prec) if prec is not None else None,
            s_max=int(s_max) if s_max is not None else None,
            jobs=int(jobs) if jobs is not None else None,
            output_format=format,
            output_path=out,
        )
    except Exception as e:
        _fail("verify", e, verbose)

    if verbose:
        print("🚀 Rogers-Ramanujan dissection identity verifier")
        print("=" * 50)
    return _finish(cmd_verify(config, perturb=perturb, verbose=verbose), verbose)


@task(
    help={
        'check': 'durfee-rectangle, thm-3.1-coefficients, a179080, partition-totals or all (default)',
        's': 's values: "3", "1..5" or "1,2,4" (default: 1..s_max)',
        'max_weight': 'Largest weight to enumerate (defaults: 12 / 20 / 40)',
        'format': 'Output format: text or structured (newline-delimited JSON)',
        'out': 'Write reports to this file instead of stdout',
        'verbose': 'Show progress information',
    },
    hookable=True,
)
def partitions(c: Context,
               check='all',
               s=None,
               max_weight=None,
               format=None,
               out=None,
               verbose=False):
    """
    Compare series coefficients with brute-force partition counts

    Examples:
        edwh rrd.partitions
        edwh rrd.partitions --check durfee-rectangle --s 1..3 --max-weight 12
    """
    from .batch import cmd_partitions

    _configure_logging(verbose)
    try:
        config = _build_config("partitions", verbose, s_values=parse_s_range(s), output_format=format,
                               output_path=out)
    except Exception as e:
        _fail("partitions", e, verbose)

    result = cmd_partitions(
        config,
        check=check,
        max_weight=int(max_weight) if max_weight is not None else None,
        verbose=verbose,
    )
    return _finish(result, verbose)


@task(
    help={
        'check': 'product, second-term, section7, ri-chain or ramanujan',
        'a': 'The parameter a > 0 (default: 1)',
        's': 'The s of the product asymptotic (default: 2)',
        'b': 'Quadratic coefficient of the single-sum check (default: 1)',
        'linear': 'Linear coefficient of the single-sum check (default: 0)',
        'schedule': 'Increasing q values in (0,1), comma-separated (default: 0.90,0.95,0.98)',
        'tol': 'Final tolerance on |ratio - 1| (default: 0.1)',
        'format': 'Output format: text or structured (newline-delimited JSON)',
        'out': 'Write the report to this file instead of stdout',
        'verbose': 'Show progress information',
    },
    positional=['check'],
    hookable=True,
)
def asympt(c: Context,
           check,
           a='1',
           s='2',
           b='1',
           linear='0',
           schedule=None,
           tol=None,
           format=None,
           out=None,
           verbose=False):
    """
    Numeric ratio-convergence check of an asymptotic formula as q -> 1-

    Examples:
        edwh rrd.asympt product --a 1 --s 2
        edwh rrd.asympt ri-chain
        edwh rrd.asympt section7 --a 2 --schedule 0.9,0.95,0.98,0.99
    """
    from .batch import cmd_asympt

    _configure_logging(verbose)
    try:
        config = _build_config(
            "asympt",
            verbose,
            schedule=parse_schedule(schedule) if schedule is not None else None,
            tol=float(tol) if tol is not None else None,
            output_format=format,
            output_path=out,
        )
        a_value, s_value, b_value, linear_value = float(a), int(s), float(b), float(linear)
    except Exception as e:
        _fail("asympt", e, verbose)

    if verbose:
        print(f"🔍 Checking {check} over q = {', '.join(str(q) for q in config.schedule)}")
    result = cmd_asympt(check, config, a=a_value, s=s_value, b=b_value, linear=linear_value, verbose=verbose)
    return _finish(result, verbose)


@task(
    help={
        'verbose': 'Show detailed setup information'
    },
    hookable=True
)
def setup(c: Context,
          verbose=False):
    """
    Setup the plugin - Create the .env file with default run settings

    Every value can still be overridden per run with the command flags.

    Examples:
        edwh rrd.setup
        edwh rrd.setup --verbose
    """
    if verbose:
        print("🚀 Setting up the Rogers-Ramanujan dissection plugin")
        print("=" * 50)

    try:
        dotenv_path = ConfigManager.get_config_path()

        if dotenv_path.exists():
            print(f"📁 Using config file: {dotenv_path.absolute()}")
        else:
            dotenv_path.parent.mkdir(parents=True, exist_ok=True)
            print(f"📝 Will create new config file: {dotenv_path.absolute()}")

        print("\n📋 Default run settings")
        edwh.check_env(
            key="RRD_PREC",
            default=str(DEFAULT_PREC),
            comment="Default precision P (exponents of t = q^(1/D) up to P are exact)",
            env_path=dotenv_path,
        )
        edwh.check_env(
            key="RRD_S_MAX",
            default=str(DEFAULT_S_MAX),
            comment="Largest s for identities with an unbounded s range",
            env_path=dotenv_path,
        )
        edwh.check_env(
            key="RRD_SCHEDULE",
            default="0.90,0.95,0.98",
            comment="q schedule of the asymptotic checks (strictly increasing, inside (0,1))",
            env_path=dotenv_path,
        )
        edwh.check_env(
            key="RRD_TOL",
            default="0.1",
            comment="Final tolerance on |ratio - 1| for the asymptotic checks",
            env_path=dotenv_path,
        )
        edwh.check_env(
            key="RRD_JOBS",
            default=str(default_jobs()),
            comment="Worker processes for verify (default: available CPUs)",
            env_path=dotenv_path,
        )
        edwh.check_env(
            key="RRD_FORMAT",
            default="text",
            comment="Output format",
            env_path=dotenv_path,
            allowed_values=("text", "structured"),
        )

        config = ConfigManager.load_config(dotenv_path, verbose=verbose)
        print("\n✅ Setup completed successfully!")
        print(f"📁 Configuration saved to: {Path(dotenv_path).absolute()}")
        print("\n🚀 You can now use:")
        print("   edwh rrd.verify --all")
        print("   edwh rrd.asympt ri-chain")

        return {
            'success': True,
            'message': 'Setup completed successfully',
            'config': config,
        }

    except KeyboardInterrupt:
        print("\n🛑 Setup cancelled by user")
        return {
            'success': False,
            'error': 'Setup cancelled by user'
        }
    except Exception as e:
        ErrorHandler.handle_task_error("setup", e, verbose)
        return {
            'success': False,
            'error': str(e)
        }


program = Program(namespace=Collection.from_module(sys.modules[__name__]), version=__version__)
