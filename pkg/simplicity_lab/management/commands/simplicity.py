from django.core.management.base import BaseCommand, CommandError
from simplicity_lab import appsettings
from simplicity_lab.forms import SUBCOMMANDS, ConfigError, parse_config
from simplicity_lab.runner import EXIT_INVALID, run


class Command(BaseCommand):
    """
    Run one experiment of the laboratory and write its artifacts.
    """
    help = "Run a simplicity experiment from a JSON configuration and write CSV/JSON artifacts with a manifest."

    def add_arguments(self, parser):
        parser.add_argument('subcommand', choices=SUBCOMMANDS, help="The experiment to run.")
        parser.add_argument('--config', help="Path to the JSON run configuration; defaults apply when left out.")
        parser.add_argument('--seed', type=int, help="Master seed, overrides disorder.seed.")
        parser.add_argument('--workers', type=int, default=appsettings.SIMPLICITY_LAB_WORKERS, help="Number of worker threads.")
        parser.add_argument('--out-dir', dest='out_dir', help="Output directory, overrides output.out_dir.")

    def handle(self, *args, **options):
        subcommand = options['subcommand']
        if options['workers'] < 1:
            raise CommandError("--workers must be at least 1.", returncode=EXIT_INVALID)

        text = ''
        if options['config']:
            try:
                with open(options['config']) as handle:
                    text = handle.read()
            except (IOError, OSError) as e:
                raise CommandError("Unable to read {0}: {1}".format(options['config'], e), returncode=EXIT_INVALID)

        try:
            config = parse_config(text, subcommand, seed=options['seed'], out_dir=options['out_dir'])
        except ConfigError as e:
            for path, message in e.errors:
                self.stderr.write("{0}: {1}".format(path or '(document)', message))
            raise CommandError("Invalid configuration, {0} error(s).".format(len(e.errors)), returncode=EXIT_INVALID)

        result = run(subcommand, config, workers=options['workers'])
        for path in result.artifacts:
            self.stdout.write(path)
        if not result.ok:
            raise CommandError(result.message or "{0} failed.".format(subcommand), returncode=result.exit_code)
        self.stdout.write("{0} finished, seed {1}.".format(subcommand, config.seed))
