import { mountApp } from "./app.js";

void mountApp(document);
