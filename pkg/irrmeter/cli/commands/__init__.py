"""
Command handlers, one module per subcommand.
"""

from irrmeter.cli.commands import asymptotics, criterion, mu, table, verify
from irrmeter.cli.runconfig import Command

HANDLERS = {
    Command.MU: mu.run,
    Command.TABLE: table.run,
    Command.VERIFY: verify.run,
    Command.ASYMPTOTICS: asymptotics.run,
    Command.CRITERION: criterion.run,
}
