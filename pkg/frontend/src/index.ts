export { base64ToFloats, floatsToBase64, fromPayload, matrix, toPayload } from "./buffers.js";
export type { ArrayPayload, Matrix } from "./buffers.js";
export { GridBankClient, ServiceError } from "./client.js";
export type { BankConfig, BankInfo, RegistryStats } from "./client.js";
