"""The `sims` command line: serve, migrate, seed, acl, audit."""

from __future__ import annotations

import sys

import click

from .access_control import render_matrix
from .audit import emit_report, run_audit
from .clock import SystemClock
from .config import HashParams, ServiceConfig
from .errors import ServiceError
from .seed import seed as seed_store
from .security import PasswordHasher
from .store import Store


def _config_from(db: str, **overrides) -> ServiceConfig:
    base = ServiceConfig.from_env()
    return base.with_overrides(storage_path=db, **overrides)


@click.group()
def main():
    """Academy student information management service."""


@main.command()
@click.option("--db", default="sims.db", show_default=True,
              help="Path to the storage file.")
@click.option("--host", default="127.0.0.1", show_default=True,
              help="Bind address.")
@click.option("--port", default=8000, show_default=True, type=int,
              help="Bind port.")
@click.option("--upload-dir", default="uploads", show_default=True,
              help="Directory for uploaded course materials.")
@click.option("--encryption-key", default=None,
              help="64 hex chars (AES-256). Generated per process if omitted.")
@click.option("--session-ttl-minutes", default=120, show_default=True, type=int,
              help="Idle session lifetime.")
@click.option("--throttle-max-failures", default=5, show_default=True, type=int,
              help="Login failures allowed per window.")
@click.option("--throttle-window-minutes", default=15, show_default=True, type=int,
              help="Throttle window length.")
@click.option("--hash-time-cost", default=3, show_default=True, type=int,
              help="Argon2id iterations.")
@click.option("--hash-memory-kib", default=64 * 1024, show_default=True, type=int,
              help="Argon2id memory cost in KiB.")
@click.option("--hash-parallelism", default=4, show_default=True, type=int,
              help="Argon2id lanes.")
@click.option("--auto-migrate", is_flag=True,
              help="Apply pending migrations before serving.")
@click.option("--seed", "seed_data", is_flag=True,
              help="Insert seed data if the store is empty.")
@click.option("--secure-cookies", is_flag=True,
              help="Mark the session cookie Secure (requires TLS in front).")
@click.option("--insecure-demo", is_flag=True,
              help="DISABLE CSRF CHECKS. Scanner-validation mode only.")
@click.option("--weaken", default="",
              help="Comma-separated fault categories (a1,a2,a3,a5,a6,a7,a10)."
                   " Deliberately vulnerable; scanner-validation mode only.")
def serve(db, host, port, upload_dir, encryption_key, session_ttl_minutes,
          throttle_max_failures, throttle_window_minutes, hash_time_cost,
          hash_memory_kib, hash_parallelism, auto_migrate, seed_data,
          secure_cookies, insecure_demo, weaken):
    """Run the HTTP service."""
    from .server import prepare_runtime, run_server

    config = _config_from(
        db,
        upload_dir=upload_dir,
        bind_host=host,
        bind_port=port,
        encryption_key=bytes.fromhex(encryption_key) if encryption_key else b"",
        session_ttl_minutes=session_ttl_minutes,
        throttle_max_failures=throttle_max_failures,
        throttle_window_minutes=throttle_window_minutes,
        hash_params=HashParams(hash_time_cost, hash_memory_kib, hash_parallelism),
        secure_cookies=secure_cookies,
        insecure_demo=insecure_demo,
        weaken=frozenset(w.strip() for w in weaken.split(",") if w.strip()),
    )
    if config.insecure_demo or config.weaken:
        click.echo("WARNING: deliberately weakened instance; never expose this",
                   err=True)
    if seed_data:
        runtime = prepare_runtime(config, auto_migrate=True, seed_data=False)
        result = seed_store(runtime.store, runtime.hasher)
        if result.created:
            click.echo(f"seeded admin {result.admin_email} "
                       f"password {result.admin_password}", err=True)
        runtime.close()
        auto_migrate = True
    try:
        run_server(config, auto_migrate=auto_migrate)
    except ServiceError as exc:
        raise click.ClickException(f"{exc.machine_code}: {exc.message}") from exc


@main.command()
@click.option("--db", default="sims.db", show_default=True)
def migrate(db):
    """Apply pending schema migrations."""
    store = Store(db, SystemClock())
    applied = store.migrate()
    if not applied:
        click.echo("schema already up to date")
    for migration in applied:
        click.echo(f"applied {migration.ordinal:04d}_{migration.description}")
    store.close()


@main.command()
@click.option("--db", default="sims.db", show_default=True)
@click.option("--admin-password", default=None,
              help="Password for the seeded admin; generated if omitted.")
def seed(db, admin_password):
    """Insert the seed data (one admin, one faculty, two departments)."""
    store = Store(db, SystemClock())
    if store.pending_migrations():
        store.migrate()
    result = seed_store(store, PasswordHasher(), admin_password=admin_password)
    if result.created:
        click.echo(f"admin email:    {result.admin_email}")
        click.echo(f"admin password: {result.admin_password}")
        click.echo("store this password now; it is not shown again")
    else:
        click.echo("store is already seeded; nothing changed")
    store.close()


@main.command()
def acl():
    """Dump the role/action permission matrix for audit."""
    click.echo(render_matrix())


@main.command()
@click.option("--target", required=True, help="Base URL of the instance to attack.")
@click.option("--fixture", required=True, type=click.Path(exists=True),
              help="JSON credentials fixture (see README for the schema).")
@click.option("--format", "output_format", default="text", show_default=True,
              type=click.Choice(["text", "machine"]))
@click.option("--category", default=None,
              help="Comma-separated subset, e.g. A1,A5. Default: all.")
@click.option("--i-know-this-is-destructive", "confirmed", is_flag=True,
              help="Required. Probes mutate and attack the target instance.")
def audit(target, fixture, output_format, category, confirmed):
    """Attack a running instance and report per-category verdicts."""
    if not confirmed:
        raise click.ClickException(
            "audit probes are destructive; re-run with --i-know-this-is-destructive"
            " against a sacrificial seeded instance"
        )
    categories = None
    if category:
        categories = [c.strip().upper() for c in category.split(",") if c.strip()]
    try:
        report = run_audit(target.rstrip("/"), fixture, categories=categories)
    except ServiceError as exc:
        click.echo(f"{exc.machine_code}: {exc.message}", err=True)
        sys.exit(2)
    click.echo(emit_report(report, output_format))
    sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
