from solvqi.controller.command_dispatcher import CommandDispatcher, render_text
